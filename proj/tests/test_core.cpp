#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "clusterlife/core.hpp"
#include "oracles.hpp"

using namespace clusterlife;

namespace {

AnalysisParams base_params() {
    AnalysisParams p;
    p.r_e = 1.0;
    p.r_n = 3.0;
    p.r_g_error = 1.0;
    p.eps = 2.0;
    p.max_dist_centroid = 10.0;
    return p;
}

}  // namespace

TEST_CASE("euclidean_distance basics") {
    CHECK(euclidean_distance({0, 0, 0}, {0, 0, 0}) == 0.0);
    CHECK(euclidean_distance({0, 0, 0}, {3, 4, 0}) == 5.0);
    CHECK(euclidean_distance({3, 4, 0}, {0, 0, 0}) == 5.0);
}

TEST_CASE("euclidean_distance matches high-precision recomputation") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> coord(-1e6, 1e6);
    for (int i = 0; i < 100; ++i) {
        const TrajectoryPoint a{coord(rng), coord(rng), 0};
        const TrajectoryPoint b{coord(rng), coord(rng), 0};
        const double got = euclidean_distance(a, b);
        const long double want = oracles::distance_ld(a, b);
        REQUIRE(std::abs(static_cast<long double>(got) - want) <=
                1e-12L * std::max<long double>(want, 1.0L));
        REQUIRE(got == euclidean_distance(b, a));
    }
}

TEST_CASE("euclidean_distance satisfies the triangle inequality") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> coord(-1e3, 1e3);
    for (int i = 0; i < 500; ++i) {
        const TrajectoryPoint a{coord(rng), coord(rng), 0};
        const TrajectoryPoint b{coord(rng), coord(rng), 0};
        const TrajectoryPoint c{coord(rng), coord(rng), 0};
        REQUIRE(euclidean_distance(a, c) <=
                euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-9);
    }
}

TEST_CASE("resample keeps readings that align with the grid") {
    AnalysisParams params = base_params();
    params.interval = 5;
    params.staleness_window = 5;
    const Trajectory t{"a", {{1.0, 2.0, 0}, {3.0, 4.0, 5}, {5.0, 6.0, 10}}};

    const auto frames = resample({t}, params);
    REQUIRE(frames.size() == 3);
    CHECK(frames[0].tick == 0);
    CHECK(frames[1].tick == 5);
    CHECK(frames[2].tick == 10);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(frames[i].positions.count("a") == 1);
        CHECK(frames[i].positions.at("a").x == t.points[i].x);
        CHECK(frames[i].positions.at("a").y == t.points[i].y);
        CHECK(frames[i].positions.at("a").tick == frames[i].tick);
    }
}

TEST_CASE("resample omits frames outside the staleness window") {
    AnalysisParams params = base_params();
    params.interval = 5;
    params.staleness_window = 5;
    const Trajectory t{"a", {{0.0, 0.0, 0}, {1.0, 1.0, 20}}};

    const auto frames = resample({t}, params);
    REQUIRE(frames.size() == 5);  // ticks 0,5,10,15,20
    CHECK(frames[0].positions.count("a") == 1);
    CHECK(frames[1].positions.count("a") == 0);
    CHECK(frames[2].positions.count("a") == 0);
    CHECK(frames[3].positions.count("a") == 0);
    CHECK(frames[4].positions.count("a") == 1);
}

TEST_CASE("resample selection equals the brute-force scan") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<Tick> tick_gap(1, 7);
    std::uniform_real_distribution<double> coord(-50, 50);

    for (int round = 0; round < 30; ++round) {
        AnalysisParams params = base_params();
        params.interval = 1 + static_cast<Tick>(rng() % 4);
        params.staleness_window = 1 + static_cast<Tick>(rng() % 6);

        std::vector<Trajectory> trajectories;
        const int count = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < count; ++i) {
            Trajectory t;
            t.id = "t" + std::to_string(i);
            Tick tick = static_cast<Tick>(rng() % 5);
            const int len = 1 + static_cast<int>(rng() % 12);
            for (int k = 0; k < len; ++k) {
                t.points.push_back({coord(rng), coord(rng), tick});
                tick += tick_gap(rng);
            }
            trajectories.push_back(std::move(t));
        }

        const auto frames = resample(trajectories, params);

        Tick min_tick = trajectories[0].points.front().tick;
        Tick max_tick = trajectories[0].points.back().tick;
        for (const auto& t : trajectories) {
            min_tick = std::min(min_tick, t.points.front().tick);
            max_tick = std::max(max_tick, t.points.back().tick);
        }
        REQUIRE(static_cast<Tick>(frames.size()) ==
                (max_tick - min_tick) / params.interval + 1);

        for (const SampledFrame& frame : frames) {
            for (const Trajectory& t : trajectories) {
                const auto expected =
                    oracles::select_reading(t, frame.tick, params.staleness_window);
                const auto it = frame.positions.find(t.id);
                if (expected) {
                    REQUIRE(it != frame.positions.end());
                    CHECK(it->second.x == expected->x);  // bit-identical coordinates
                    CHECK(it->second.y == expected->y);
                } else {
                    CHECK(it == frame.positions.end());
                }
            }
        }
    }
}

TEST_CASE("resample rejects bad input") {
    const AnalysisParams params = base_params();
    CHECK_THROWS_AS(resample({}, params), std::invalid_argument);
    CHECK_THROWS_AS(resample({Trajectory{"a", {}}}, params), std::invalid_argument);
    CHECK_THROWS_AS(resample({Trajectory{"a", {{0, 0, 5}, {0, 0, 5}}}}, params),
                    std::invalid_argument);
    CHECK_THROWS_AS(resample({Trajectory{"a", {{0, 0, 5}, {0, 0, 2}}}}, params),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        resample({Trajectory{"a", {{0, 0, 0}}}, Trajectory{"a", {{0, 0, 1}}}}, params),
        std::invalid_argument);
}

TEST_CASE("params validation") {
    AnalysisParams p = base_params();
    CHECK_NOTHROW(p.validate());

    SECTION("scale-bound fields are required") {
        AnalysisParams missing;
        CHECK_THROWS_AS(missing.validate(), std::invalid_argument);
    }
    SECTION("r_e must not exceed r_n") {
        p.r_e = 5.0;
        p.r_n = 1.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SECTION("min_cluster lower bound") {
        p.min_cluster = 1;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SECTION("min_shared open interval") {
        p.min_shared = 1.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SECTION("derived defaults") {
        p.interval = 4;
        const AnalysisParams n = p.normalized();
        CHECK(n.staleness_window == 4);
        CHECK(n.halo == 2.0 * p.eps);
    }
}
