#pragma once

#include <deque>
#include <stdexcept>
#include <vector>

#include "clusterlife/core.hpp"

namespace clusterlife {

/// One cluster at one universal timestamp.
struct ClusterInstance {
    Tick tick = 0;
    int local_index = 0;                 ///< ordinal within the frame
    std::vector<TrajectoryId> members;   ///< sorted ascending, distinct
    TrajectoryPoint centroid;            ///< coordinate-wise mean, tick = frame tick
    bool valid = false;                  ///< |members| >= min_cluster

    friend bool operator==(const ClusterInstance&, const ClusterInstance&) = default;
};

/// The clusters found in one frame plus the unclustered remainder.
struct FrameClustering {
    Tick tick = 0;
    std::vector<ClusterInstance> clusters;
    std::vector<TrajectoryId> noise;     ///< sorted ascending

    friend bool operator==(const FrameClustering&, const FrameClustering&) = default;
};

/// Coordinate-wise arithmetic mean of the members' frame positions.
inline TrajectoryPoint centroid_of(const std::vector<TrajectoryId>& members,
                                   const SampledFrame& frame) {
    if (members.empty())
        throw std::invalid_argument("centroid_of: empty member set");
    double sx = 0.0;
    double sy = 0.0;
    for (const TrajectoryId& id : members) {
        auto it = frame.positions.find(id);
        if (it == frame.positions.end())
            throw std::invalid_argument("centroid_of: member not present in frame: " + id);
        sx += it->second.x;
        sy += it->second.y;
    }
    const double n = static_cast<double>(members.size());
    return TrajectoryPoint{sx / n, sy / n, frame.tick};
}

/// DBSCAN over one frame with radius eps and density threshold min_pts.
///
/// A point's eps-neighborhood includes the point itself (dist <= eps); a
/// point is core iff its neighborhood has at least min_pts points. The scan
/// runs in ascending trajectory id, clusters are numbered by their first
/// core point's scan position, and a border point attaches to the first
/// cluster whose expansion reaches it - the one deterministic order makes
/// the result reproducible.
inline FrameClustering cluster_frame(const SampledFrame& frame, const AnalysisParams& params) {
    FrameClustering out;
    out.tick = frame.tick;

    const std::size_t n = frame.positions.size();
    std::vector<const TrajectoryId*> ids;
    std::vector<TrajectoryPoint> pts;
    ids.reserve(n);
    pts.reserve(n);
    for (const auto& [id, p] : frame.positions) {
        ids.push_back(&id);
        pts.push_back(p);
    }

    std::vector<std::vector<std::size_t>> neighbors(n);
    for (std::size_t i = 0; i < n; ++i) {
        neighbors[i].push_back(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (euclidean_distance(pts[i], pts[j]) <= params.eps) {
                neighbors[i].push_back(j);
                neighbors[j].push_back(i);
            }
        }
    }

    constexpr int kUnassigned = -1;
    std::vector<int> assignment(n, kUnassigned);
    std::vector<char> core(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        core[i] = neighbors[i].size() >= static_cast<std::size_t>(params.min_pts);

    int cluster_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!core[i] || assignment[i] != kUnassigned) continue;
        const int cluster = cluster_count++;
        assignment[i] = cluster;
        std::deque<std::size_t> work(neighbors[i].begin(), neighbors[i].end());
        while (!work.empty()) {
            const std::size_t q = work.front();
            work.pop_front();
            if (assignment[q] != kUnassigned) continue;
            assignment[q] = cluster;
            if (core[q])
                work.insert(work.end(), neighbors[q].begin(), neighbors[q].end());
        }
    }

    std::vector<std::vector<TrajectoryId>> member_lists(static_cast<std::size_t>(cluster_count));
    for (std::size_t i = 0; i < n; ++i) {
        if (assignment[i] == kUnassigned)
            out.noise.push_back(*ids[i]);
        else
            member_lists[static_cast<std::size_t>(assignment[i])].push_back(*ids[i]);
    }

    out.clusters.reserve(member_lists.size());
    for (int c = 0; c < cluster_count; ++c) {
        ClusterInstance inst;
        inst.tick = frame.tick;
        inst.local_index = c;
        inst.members = std::move(member_lists[static_cast<std::size_t>(c)]);
        inst.centroid = centroid_of(inst.members, frame);
        inst.valid = inst.members.size() >= static_cast<std::size_t>(params.min_cluster);
        out.clusters.push_back(std::move(inst));
    }
    return out;
}

/// Demotes clusters below min_cluster: their members move to noise,
/// survivors keep their local indices. Idempotent.
inline FrameClustering filter_valid(const FrameClustering& clustering,
                                    const AnalysisParams& params) {
    FrameClustering out;
    out.tick = clustering.tick;
    out.noise = clustering.noise;
    for (const ClusterInstance& c : clustering.clusters) {
        if (c.members.size() >= static_cast<std::size_t>(params.min_cluster)) {
            ClusterInstance kept = c;
            kept.valid = true;
            out.clusters.push_back(std::move(kept));
        } else {
            out.noise.insert(out.noise.end(), c.members.begin(), c.members.end());
        }
    }
    std::sort(out.noise.begin(), out.noise.end());
    return out;
}

}  // namespace clusterlife
