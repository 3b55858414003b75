#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace clusterlife {

using Tick = std::int64_t;
using TrajectoryId = std::string;

/// One timestamped 2-D reading of a moving element.
struct TrajectoryPoint {
    double x = 0.0;
    double y = 0.0;
    Tick tick = 0;

    friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

/// An identified, tick-ordered series of readings. Ticks are strictly
/// increasing within one trajectory; length >= 1.
struct Trajectory {
    TrajectoryId id;
    std::vector<TrajectoryPoint> points;
};

inline double euclidean_distance(const TrajectoryPoint& a, const TrajectoryPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Every tunable of the analysis.
///
/// eps, r_e, r_n, r_g_error and max_dist_centroid depend on the data's
/// spatial scale and have no usable default; validate() rejects a params
/// set until they are provided. staleness_window and halo have derived
/// defaults resolved by normalized().
struct AnalysisParams {
    double r_e = 0.0;                ///< error radius; displacements within it count as stopped
    double r_n = 0.0;                ///< neighborhood radius; leaving it while stepping beyond r_e means moving
    double r_g_error = 0.0;          ///< group stop radius
    double eps = 0.0;                ///< clustering distance threshold
    int min_pts = 3;                 ///< minimum eps-neighborhood size (the point itself counts) for a core point
    int min_cluster = 3;             ///< minimum valid cluster size
    double min_shared = 0.5;         ///< strict shared-element fraction for identity threading
    double max_dist_centroid = 0.0;  ///< centroid comparison cutoff
    Tick interval = 1;               ///< universal-timestamp spacing
    Tick staleness_window = 0;       ///< max age of a reading used at a universal tick; 0 = use interval
    double partial_shared = 0.25;    ///< fraction of a cluster's members that marks a split/merge contributor
    double grid_cell = 0.0;          ///< grid cell edge length; 0 = no partitioning
    double halo = -1.0;              ///< ghost margin around grid cells; negative = use 2*eps

    /// Resolves the derived defaults (staleness_window, halo).
    AnalysisParams normalized() const {
        AnalysisParams p = *this;
        if (p.staleness_window <= 0) p.staleness_window = p.interval;
        if (p.halo < 0.0) p.halo = 2.0 * p.eps;
        return p;
    }

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const {
        const AnalysisParams p = normalized();
        if (!(p.r_e > 0.0)) throw std::invalid_argument("params: r_e must be > 0");
        if (!(p.r_e <= p.r_n)) throw std::invalid_argument("params: r_e must be <= r_n");
        if (!(p.r_g_error > 0.0)) throw std::invalid_argument("params: r_g_error must be > 0");
        if (!(p.eps > 0.0)) throw std::invalid_argument("params: eps must be > 0");
        if (p.min_pts < 1) throw std::invalid_argument("params: min_pts must be >= 1");
        if (p.min_cluster < 2) throw std::invalid_argument("params: min_cluster must be >= 2");
        if (!(p.min_shared > 0.0 && p.min_shared < 1.0))
            throw std::invalid_argument("params: min_shared must lie in (0,1)");
        if (!(p.partial_shared > 0.0 && p.partial_shared < 1.0))
            throw std::invalid_argument("params: partial_shared must lie in (0,1)");
        if (!(p.max_dist_centroid > 0.0))
            throw std::invalid_argument("params: max_dist_centroid must be > 0");
        if (p.interval < 1) throw std::invalid_argument("params: interval must be >= 1");
        if (p.staleness_window < 1)
            throw std::invalid_argument("params: staleness_window must be >= 1");
        if (!(p.grid_cell >= 0.0)) throw std::invalid_argument("params: grid_cell must be >= 0");
        if (!(p.halo >= 0.0)) throw std::invalid_argument("params: halo must be >= 0");
    }
};

/// All sampled positions at one universal timestamp. Stored points carry
/// the frame tick; their coordinates are bit-identical to the source
/// reading selected by the resampling rule.
struct SampledFrame {
    Tick tick = 0;
    std::map<TrajectoryId, TrajectoryPoint> positions;
};

namespace detail {

inline void check_trajectory(const Trajectory& t) {
    if (t.points.empty())
        throw std::invalid_argument("trajectory " + t.id + " has no points");
    for (std::size_t i = 0; i < t.points.size(); ++i) {
        if (t.points[i].tick < 0)
            throw std::invalid_argument("trajectory " + t.id + " has a negative tick");
        if (i > 0 && t.points[i].tick <= t.points[i - 1].tick)
            throw std::invalid_argument("trajectory " + t.id +
                                        " ticks are not strictly increasing");
    }
}

}  // namespace detail

/// Aligns raw trajectories onto the universal timestamp grid.
///
/// Universal ticks run from the earliest tick in the dataset to the latest,
/// spaced by params.interval. For each trajectory and universal tick u the
/// selected reading is the earliest point with tick >= u and
/// tick - u < staleness_window; a trajectory with no such reading is absent
/// from that frame. No interpolation: coordinates are copied verbatim.
inline std::vector<SampledFrame> resample(const std::vector<Trajectory>& trajectories,
                                          const AnalysisParams& raw_params) {
    const AnalysisParams params = raw_params.normalized();
    if (trajectories.empty())
        throw std::invalid_argument("resample: no trajectory data");
    if (params.interval < 1)
        throw std::invalid_argument("resample: interval must be >= 1");

    Tick first = std::numeric_limits<Tick>::max();
    Tick last = std::numeric_limits<Tick>::min();
    std::set<TrajectoryId> seen;
    for (const Trajectory& t : trajectories) {
        detail::check_trajectory(t);
        if (!seen.insert(t.id).second)
            throw std::invalid_argument("resample: duplicate trajectory id " + t.id);
        first = std::min(first, t.points.front().tick);
        last = std::max(last, t.points.back().tick);
    }

    std::vector<SampledFrame> frames;
    frames.reserve(static_cast<std::size_t>((last - first) / params.interval) + 1);
    for (Tick u = first; u <= last; u += params.interval)
        frames.push_back(SampledFrame{u, {}});

    for (const Trajectory& t : trajectories) {
        std::size_t idx = 0;
        for (SampledFrame& frame : frames) {
            while (idx < t.points.size() && t.points[idx].tick < frame.tick) ++idx;
            if (idx == t.points.size()) break;
            const TrajectoryPoint& p = t.points[idx];
            if (p.tick - frame.tick < params.staleness_window)
                frame.positions.emplace(t.id, TrajectoryPoint{p.x, p.y, frame.tick});
        }
    }
    return frames;
}

}  // namespace clusterlife
