#pragma once

#include <atomic>
#include <cmath>
#include <compare>
#include <map>
#include <stdexcept>
#include <thread>
#include <vector>

#include "clusterlife/lifecycle.hpp"

namespace clusterlife {

/// One grid cell, addressed by floor(coordinate / grid_cell). Owned regions
/// tile the plane; the computation window (owned region expanded by the
/// halo margin) may overlap neighbors.
struct GridCell {
    std::int64_t x = 0;
    std::int64_t y = 0;

    auto operator<=>(const GridCell&) const = default;
};

inline GridCell owner_cell(double x, double y, double grid_cell) {
    return GridCell{static_cast<std::int64_t>(std::floor(x / grid_cell)),
                    static_cast<std::int64_t>(std::floor(y / grid_cell))};
}

namespace detail {

struct CellBounds {
    double x_lo, x_hi, y_lo, y_hi;  // owned region [lo, hi)
};

inline CellBounds bounds_of(const GridCell& cell, double grid_cell) {
    return CellBounds{static_cast<double>(cell.x) * grid_cell,
                      static_cast<double>(cell.x + 1) * grid_cell,
                      static_cast<double>(cell.y) * grid_cell,
                      static_cast<double>(cell.y + 1) * grid_cell};
}

// Half-open like the owned region, so halo = 0 replicates nothing.
inline bool in_window(const CellBounds& b, double halo, double px, double py) {
    return px >= b.x_lo - halo && px < b.x_hi + halo && py >= b.y_lo - halo &&
           py < b.y_hi + halo;
}

/// Distance from a point inside the window to the window boundary.
inline double window_margin(const CellBounds& b, double halo, double px, double py) {
    const double mx = std::min(px - (b.x_lo - halo), (b.x_hi + halo) - px);
    const double my = std::min(py - (b.y_lo - halo), (b.y_hi + halo) - py);
    return std::min(mx, my);
}

}  // namespace detail

/// Splits frames across grid cells. A reading is owned by exactly one cell
/// (floor semantics) and copied into every other cell whose halo window
/// contains it. Each cell receives a frame for every universal tick, so
/// tick alignment is preserved.
inline std::map<GridCell, std::vector<SampledFrame>> partition(
    const std::vector<SampledFrame>& frames, const AnalysisParams& raw_params) {
    const AnalysisParams params = raw_params.normalized();
    if (params.grid_cell <= 0.0)
        throw std::invalid_argument("partition: grid_cell <= 0 disables partitioning");
    const double g = params.grid_cell;
    const double halo = params.halo;

    std::map<GridCell, std::vector<SampledFrame>> cells;
    for (const SampledFrame& frame : frames)
        for (const auto& [id, p] : frame.positions) cells[owner_cell(p.x, p.y, g)];

    for (auto& [cell, cell_frames] : cells) {
        cell_frames.reserve(frames.size());
        for (const SampledFrame& frame : frames)
            cell_frames.push_back(SampledFrame{frame.tick, {}});
    }

    const std::int64_t reach = static_cast<std::int64_t>(std::ceil(halo / g)) + 1;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        for (const auto& [id, p] : frames[f].positions) {
            const GridCell owner = owner_cell(p.x, p.y, g);
            for (std::int64_t cx = owner.x - reach; cx <= owner.x + reach; ++cx) {
                for (std::int64_t cy = owner.y - reach; cy <= owner.y + reach; ++cy) {
                    const GridCell cell{cx, cy};
                    auto it = cells.find(cell);
                    if (it == cells.end()) continue;
                    if (cell == owner ||
                        detail::in_window(detail::bounds_of(cell, g), halo, p.x, p.y))
                        it->second[f].positions.emplace(id, p);
                }
            }
        }
    }
    return cells;
}

namespace detail {

struct CellOutcome {
    AnalysisResult result;
    std::map<Tick, std::size_t> border_counts;
};

/// Full pipeline for one cell: cluster over owned+halo points, keep only
/// clusters whose centroid the cell owns, thread lifecycles, and flag
/// clusters whose analysis the window edge may have affected (some member
/// closer than eps to the window boundary).
inline CellOutcome analyze_cell(const GridCell& cell, const std::vector<SampledFrame>& frames,
                                const AnalysisParams& params) {
    const CellBounds bounds = bounds_of(cell, params.grid_cell);
    CellOutcome outcome;
    LifecycleEngine engine(params);
    for (const SampledFrame& frame : frames) {
        FrameClustering clustering = filter_valid(cluster_frame(frame, params), params);
        FrameClustering retained;
        retained.tick = clustering.tick;
        retained.noise = std::move(clustering.noise);
        for (ClusterInstance& c : clustering.clusters) {
            if (owner_cell(c.centroid.x, c.centroid.y, params.grid_cell) != cell) continue;
            bool near_edge = false;
            for (const TrajectoryId& id : c.members) {
                const TrajectoryPoint& p = frame.positions.at(id);
                if (window_margin(bounds, params.halo, p.x, p.y) < params.eps) {
                    near_edge = true;
                    break;
                }
            }
            if (near_edge) ++outcome.border_counts[frame.tick];
            retained.clusters.push_back(std::move(c));
        }
        engine.advance(frame, retained);
    }
    outcome.result = engine.finish();
    return outcome;
}

}  // namespace detail

/// Runs the whole pipeline cell-by-cell on a bounded worker pool and merges
/// the per-cell outputs deterministically (cells in coordinate order,
/// identities renumbered into one sequence, events re-sorted canonically).
/// grid_cell = 0 is the identity pipeline. Border effects are reported, not
/// repaired: straddling clusters are never stitched across cells.
inline AnalysisResult run_partitioned(const std::vector<SampledFrame>& frames,
                                      const AnalysisParams& raw_params, int worker_count) {
    const AnalysisParams params = raw_params.normalized();
    if (worker_count < 1)
        throw std::invalid_argument("run_partitioned: worker_count must be >= 1");
    if (params.grid_cell <= 0.0) return analyze_frames(frames, params);

    const std::map<GridCell, std::vector<SampledFrame>> cells = partition(frames, params);
    std::vector<const std::pair<const GridCell, std::vector<SampledFrame>>*> work;
    work.reserve(cells.size());
    for (const auto& entry : cells) work.push_back(&entry);

    std::vector<detail::CellOutcome> outcomes(work.size());
    std::atomic<std::size_t> next{0};
    auto run_worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < work.size(); i = next.fetch_add(1))
            outcomes[i] = detail::analyze_cell(work[i]->first, work[i]->second, params);
    };
    const std::size_t threads =
        std::min(static_cast<std::size_t>(worker_count), std::max<std::size_t>(work.size(), 1));
    if (threads <= 1) {
        run_worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(run_worker);
        for (std::thread& t : pool) t.join();
    }

    AnalysisResult combined;
    if (!frames.empty()) {
        combined.first_tick = frames.front().tick;
        combined.last_tick = frames.back().tick;
    }
    IdentityId next_id = 0;
    for (std::size_t i = 0; i < work.size(); ++i) {
        const GridCell& cell = work[i]->first;
        detail::CellOutcome& outcome = outcomes[i];

        std::map<IdentityId, IdentityId> rename;
        std::vector<ClusterLifecycle> by_id = std::move(outcome.result.lifecycles);
        std::sort(by_id.begin(), by_id.end(),
                  [](const ClusterLifecycle& a, const ClusterLifecycle& b) { return a.id < b.id; });
        for (ClusterLifecycle& lc : by_id) rename[lc.id] = next_id++;

        auto rewrite = [&rename](LifecycleEvent& e) {
            e.subject = rename.at(e.subject);
            for (IdentityId& p : e.cluster_participants) p = rename.at(p);
        };
        for (ClusterLifecycle& lc : by_id) {
            lc.id = rename.at(lc.id);
            lc.cell = std::make_pair(cell.x, cell.y);
            for (LifecycleEvent& e : lc.events) rewrite(e);
            combined.lifecycles.push_back(std::move(lc));
        }
        for (LifecycleEvent& e : outcome.result.events) {
            rewrite(e);
            combined.events.push_back(std::move(e));
        }
        for (const auto& [tick, count] : outcome.border_counts)
            combined.border_counts[tick] += count;
    }
    std::sort(combined.events.begin(), combined.events.end(), event_canonical_less);
    std::sort(combined.lifecycles.begin(), combined.lifecycles.end(),
              [](const ClusterLifecycle& a, const ClusterLifecycle& b) {
                  if (a.birth != b.birth) return a.birth < b.birth;
                  return a.id < b.id;
              });
    return combined;
}

}  // namespace clusterlife
