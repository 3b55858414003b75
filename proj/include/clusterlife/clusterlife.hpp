#pragma once

#include "clusterlife/clustering.hpp"
#include "clusterlife/core.hpp"
#include "clusterlife/grid.hpp"
#include "clusterlife/io.hpp"
#include "clusterlife/lifecycle.hpp"
#include "clusterlife/motion.hpp"
#include "clusterlife/scenario.hpp"
