#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "clusterlife/core.hpp"
#include "clusterlife/lifecycle.hpp"

namespace clusterlife {

enum class ScenarioKind { Stable, Split, Merge, Churn, Crossing, Mixed };

inline const char* scenario_kind_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Stable: return "stable";
        case ScenarioKind::Split: return "split";
        case ScenarioKind::Merge: return "merge";
        case ScenarioKind::Churn: return "churn";
        case ScenarioKind::Crossing: return "crossing";
        case ScenarioKind::Mixed: return "mixed";
    }
    return "?";
}

inline std::optional<ScenarioKind> scenario_kind_from_name(const std::string& name) {
    for (ScenarioKind k : {ScenarioKind::Stable, ScenarioKind::Split, ScenarioKind::Merge,
                           ScenarioKind::Churn, ScenarioKind::Crossing, ScenarioKind::Mixed})
        if (name == scenario_kind_name(k)) return k;
    return std::nullopt;
}

/// A synthetic dataset recipe. Planted clusters sit on well-separated
/// sites (spacing = scale) and interact with crisp jump geometry at seeded
/// ticks, so the expected event sequence is unambiguous.
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::Stable;
    int cluster_count = 1;
    int members_per_cluster = 5;
    Tick horizon = 30;  ///< number of frames; ticks run 0..horizon-1
    int noise_count = 0;
    double scale = 100.0;  ///< spacing between planted cluster sites
    std::uint64_t seed = 0;

    /// Analysis parameters matched to the planted geometry. Interaction
    /// margins are multiples of this eps; ground truth assumes these
    /// min_shared / partial_shared values.
    AnalysisParams recommended_params() const {
        AnalysisParams p;
        p.eps = scale / 20.0;
        p.r_e = p.eps / 2.0;
        p.r_n = 2.0 * p.eps;
        p.r_g_error = p.eps / 2.0;
        p.max_dist_centroid = 6.0 * p.eps;
        return p;
    }
};

/// One expected event: kind, planted tick, participant cardinality.
struct TruthEvent {
    EventKind kind = EventKind::Start;
    Tick tick = 0;
    std::size_t cardinality = 0;

    friend bool operator==(const TruthEvent&, const TruthEvent&) = default;
};

struct GroundTruth {
    std::vector<TruthEvent> events;
    std::size_t identity_count = 0;
};

struct GeneratedScenario {
    std::vector<Trajectory> trajectories;
    GroundTruth truth;
};

namespace detail {

class ScenarioBuilder {
  public:
    ScenarioBuilder(const ScenarioSpec& spec)
        : spec_(spec),
          eps_(spec.recommended_params().eps),
          blob_(spec.recommended_params().eps / 4.0),
          rng_(spec.seed) {}

    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    Tick pick_tick(Tick lo, Tick hi) {
        return lo + static_cast<Tick>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    std::pair<double, double> site(int i) const {
        return {(static_cast<double>(i) + 0.5) * spec_.scale, 0.5 * spec_.scale};
    }

    /// Far row of mutually separated positions for inactive trajectories.
    std::pair<double, double> parking_spot() {
        const int k = parking_slots_++;
        return {(static_cast<double>(k) + 0.5) * spec_.scale, -3.5 * spec_.scale};
    }

    std::pair<double, double> ring_offset(int j, int m, double radius, double phase) const {
        const double angle =
            2.0 * std::acos(-1.0) * ((static_cast<double>(j) + phase) / static_cast<double>(m));
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    void add_point(const TrajectoryId& id, Tick tick, double x, double y) {
        tracks_[id].push_back(TrajectoryPoint{x, y, tick});
    }

    void expect(EventKind kind, Tick tick, std::size_t cardinality) {
        truth_.events.push_back(TruthEvent{kind, tick, cardinality});
    }

    static TrajectoryId member_id(int cluster, int member) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "c%02dm%03d", cluster, member);
        return buf;
    }

    /// A cluster that sits at one place over [from, to].
    void stable_cluster(int index, Tick from, Tick to) {
        const auto [cx, cy] = site(index);
        const int m = spec_.members_per_cluster;
        const double phase = unit();
        for (int j = 0; j < m; ++j) {
            const auto [dx, dy] = ring_offset(j, m, blob_, phase);
            for (Tick t = from; t <= to; ++t) add_point(member_id(index, j), t, cx + dx, cy + dy);
        }
        expect(EventKind::Start, from, 0);
        ++truth_.identity_count;
    }

    /// Cluster `index` splits in half at a seeded tick; both halves hold at
    /// +-2 eps afterwards. With an even member count neither half is a
    /// same-match (strict Eq-style inequality), so the parent ends and two
    /// identities start; with an odd count the larger half continues it.
    void split_cluster(int index) {
        const Tick split_tick = pick_tick(3, spec_.horizon - 5);
        const auto [cx, cy] = site(index);
        const int m = spec_.members_per_cluster;
        const int upper_half = (m + 1) / 2;
        const double phase = unit();
        for (int j = 0; j < m; ++j) {
            const TrajectoryId id = member_id(index, j);
            const bool first_half = j < upper_half;
            const int sub_count = first_half ? upper_half : m - upper_half;
            const int sub_index = first_half ? j : j - upper_half;
            const auto [dx0, dy0] = ring_offset(j, m, blob_, phase);
            const auto [dx1, dy1] = ring_offset(sub_index, sub_count, blob_, phase);
            const double side = first_half ? -1.0 : 1.0;
            for (Tick t = 0; t < spec_.horizon; ++t) {
                if (t < split_tick) {
                    add_point(id, t, cx + dx0, cy + dy0);
                } else {
                    const double offset = t == split_tick ? eps_ : 2.0 * eps_;
                    add_point(id, t, cx + side * offset + dx1, cy + dy1);
                }
            }
        }
        expect(EventKind::Start, 0, 0);
        expect(EventKind::Split, split_tick, 2);
        ++truth_.identity_count;
        if (m % 2 == 0) {
            expect(EventKind::End, split_tick, 0);
            expect(EventKind::Start, split_tick, 0);
            expect(EventKind::Start, split_tick, 0);
            truth_.identity_count += 2;
        } else {
            expect(EventKind::Start, split_tick, 0);
            truth_.identity_count += 1;
        }
    }

    /// Two clusters hold at +-2 eps around the site, then jump together at
    /// a seeded tick. Neither is a same-match of the union, so both end and
    /// a merged identity starts.
    void merge_pair(int index, int first_cluster, int second_cluster) {
        const Tick merge_tick = pick_tick(3, spec_.horizon - 4);
        const auto [cx, cy] = site(index);
        const int m = spec_.members_per_cluster;
        const double phase = unit();
        for (int half = 0; half < 2; ++half) {
            const int cluster = half == 0 ? first_cluster : second_cluster;
            const double side = half == 0 ? -1.0 : 1.0;
            for (int j = 0; j < m; ++j) {
                const TrajectoryId id = member_id(cluster, j);
                const auto [dx0, dy0] = ring_offset(j, m, blob_, phase);
                const auto [dx1, dy1] = ring_offset(half * m + j, 2 * m, blob_, phase);
                for (Tick t = 0; t < spec_.horizon; ++t) {
                    if (t < merge_tick)
                        add_point(id, t, cx + side * 2.0 * eps_ + dx0, cy + dy0);
                    else
                        add_point(id, t, cx + dx1, cy + dy1);
                }
            }
        }
        expect(EventKind::Start, 0, 0);
        expect(EventKind::Start, 0, 0);
        expect(EventKind::Merge, merge_tick, 2);
        expect(EventKind::End, merge_tick, 0);
        expect(EventKind::End, merge_tick, 0);
        expect(EventKind::Start, merge_tick, 0);
        truth_.identity_count += 3;
    }

    /// A stable cluster joined by one outside trajectory at a seeded tick
    /// and left by one original member at a later seeded tick.
    void churn_cluster(int index) {
        const Tick enter_tick = pick_tick(3, spec_.horizon - 7);
        const Tick leave_tick = pick_tick(enter_tick + 3, spec_.horizon - 4);
        const auto [cx, cy] = site(index);
        const int m = spec_.members_per_cluster;
        const double phase = unit();

        const auto [park_in_x, park_in_y] = parking_spot();
        const auto [park_out_x, park_out_y] = parking_spot();

        for (int j = 0; j < m; ++j) {
            const TrajectoryId id = member_id(index, j);
            const auto [dx, dy] = ring_offset(j, m, blob_, phase);
            for (Tick t = 0; t < spec_.horizon; ++t) {
                if (j == 0 && t >= leave_tick)
                    add_point(id, t, park_out_x, park_out_y);
                else
                    add_point(id, t, cx + dx, cy + dy);
            }
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "c%02de%03d", index, 0);
        const TrajectoryId joiner = buf;
        const auto [jx, jy] = ring_offset(0, 1, blob_ / 2.0, unit());
        for (Tick t = 0; t < spec_.horizon; ++t) {
            if (t < enter_tick)
                add_point(joiner, t, park_in_x, park_in_y);
            else
                add_point(joiner, t, cx + jx, cy + jy);
        }
        expect(EventKind::Start, 0, 0);
        expect(EventKind::Enter, enter_tick, 1);
        expect(EventKind::Leave, leave_tick, 1);
        ++truth_.identity_count;
    }

    /// Two clusters coincide for a few frames and separate again: a merge
    /// followed by a split, with the bookkeeping identities in between.
    void crossing_pair(int index, int first_cluster, int second_cluster) {
        const Tick meet_tick = pick_tick(3, spec_.horizon - 7);
        const Tick part_tick = pick_tick(meet_tick + 3, spec_.horizon - 4);
        const auto [cx, cy] = site(index);
        const int m = spec_.members_per_cluster;
        const double phase = unit();
        for (int half = 0; half < 2; ++half) {
            const int cluster = half == 0 ? first_cluster : second_cluster;
            const double side = half == 0 ? -1.0 : 1.0;
            for (int j = 0; j < m; ++j) {
                const TrajectoryId id = member_id(cluster, j);
                const auto [dx0, dy0] = ring_offset(j, m, blob_, phase);
                const auto [dx1, dy1] = ring_offset(half * m + j, 2 * m, blob_, phase);
                for (Tick t = 0; t < spec_.horizon; ++t) {
                    if (t < meet_tick || t >= part_tick)
                        add_point(id, t, cx + side * 2.0 * eps_ + dx0, cy + dy0);
                    else
                        add_point(id, t, cx + dx1, cy + dy1);
                }
            }
        }
        expect(EventKind::Start, 0, 0);
        expect(EventKind::Start, 0, 0);
        expect(EventKind::Merge, meet_tick, 2);
        expect(EventKind::End, meet_tick, 0);
        expect(EventKind::End, meet_tick, 0);
        expect(EventKind::Start, meet_tick, 0);
        expect(EventKind::Split, part_tick, 2);
        expect(EventKind::End, part_tick, 0);
        expect(EventKind::Start, part_tick, 0);
        expect(EventKind::Start, part_tick, 0);
        truth_.identity_count += 5;
    }

    void add_noise() {
        for (int j = 0; j < spec_.noise_count; ++j) {
            const auto [px, py] = parking_spot();
            char buf[32];
            std::snprintf(buf, sizeof buf, "noise%03d", j);
            for (Tick t = 0; t < spec_.horizon; ++t) add_point(buf, t, px, py);
        }
    }

    GeneratedScenario take() {
        add_noise();
        GeneratedScenario out;
        for (auto& [id, points] : tracks_) out.trajectories.push_back(Trajectory{id, points});
        std::sort(truth_.events.begin(), truth_.events.end(),
                  [](const TruthEvent& a, const TruthEvent& b) {
                      if (a.tick != b.tick) return a.tick < b.tick;
                      if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
                      return a.cardinality < b.cardinality;
                  });
        out.truth = std::move(truth_);
        return out;
    }

  private:
    const ScenarioSpec& spec_;
    double eps_;
    double blob_;
    std::mt19937_64 rng_;
    int parking_slots_ = 0;
    std::map<TrajectoryId, std::vector<TrajectoryPoint>> tracks_;
    GroundTruth truth_;
};

}  // namespace detail

/// Builds a synthetic dataset with its planted ground truth. Deterministic
/// for a given spec+seed. Throws std::invalid_argument naming the violated
/// feasibility bound for infeasible specs.
inline GeneratedScenario generate(const ScenarioSpec& spec) {
    const bool needs_events = spec.kind != ScenarioKind::Stable;
    if (spec.cluster_count < 1)
        throw std::invalid_argument("scenario: cluster_count must be >= 1");
    if (spec.members_per_cluster < 3)
        throw std::invalid_argument("scenario: members_per_cluster must be >= 3 (min_cluster)");
    if (spec.noise_count < 0)
        throw std::invalid_argument("scenario: noise_count must be >= 0");
    if (!(spec.scale > 0.0))
        throw std::invalid_argument("scenario: scale must be > 0");
    if (spec.horizon < 1)
        throw std::invalid_argument("scenario: horizon must be >= 1");
    if (needs_events && spec.horizon < 10)
        throw std::invalid_argument("scenario: event scenarios require horizon >= 10");
    if ((spec.kind == ScenarioKind::Split || spec.kind == ScenarioKind::Mixed) &&
        spec.members_per_cluster < 6)
        throw std::invalid_argument(
            "scenario: split requires members_per_cluster >= 6 (2 * min_cluster)");
    if ((spec.kind == ScenarioKind::Merge || spec.kind == ScenarioKind::Crossing) &&
        spec.cluster_count < 2)
        throw std::invalid_argument("scenario: merge/crossing require cluster_count >= 2");
    if (spec.kind == ScenarioKind::Mixed && spec.cluster_count < 4)
        throw std::invalid_argument("scenario: mixed requires cluster_count >= 4");

    detail::ScenarioBuilder b(spec);
    const Tick last = spec.horizon - 1;
    switch (spec.kind) {
        case ScenarioKind::Stable:
            for (int i = 0; i < spec.cluster_count; ++i) b.stable_cluster(i, 0, last);
            break;
        case ScenarioKind::Split:
            b.split_cluster(0);
            for (int i = 1; i < spec.cluster_count; ++i) b.stable_cluster(i, 0, last);
            break;
        case ScenarioKind::Merge:
            b.merge_pair(0, 0, 1);
            for (int i = 2; i < spec.cluster_count; ++i) b.stable_cluster(i, 0, last);
            break;
        case ScenarioKind::Churn:
            b.churn_cluster(0);
            for (int i = 1; i < spec.cluster_count; ++i) b.stable_cluster(i, 0, last);
            break;
        case ScenarioKind::Crossing:
            b.crossing_pair(0, 0, 1);
            for (int i = 2; i < spec.cluster_count; ++i) b.stable_cluster(i, 0, last);
            break;
        case ScenarioKind::Mixed:
            b.split_cluster(0);
            b.merge_pair(1, 1, 2);
            b.churn_cluster(3);
            for (int i = 4; i < spec.cluster_count; ++i) b.stable_cluster(i, 0, last);
            break;
    }
    return b.take();
}

/// Precision/recall bookkeeping for one event kind.
struct KindScore {
    std::size_t expected = 0;
    std::size_t detected = 0;
    std::size_t matched = 0;

    double precision() const {
        return detected == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(detected);
    }
    double recall() const {
        return expected == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(expected);
    }
};

struct ScoreReport {
    std::map<EventKind, KindScore> per_kind;
    KindScore overall;
};

/// Greedy matching of detected events against truth: a pair matches when
/// kinds agree, ticks differ by at most `tolerance`, and participant
/// cardinalities agree; closest tick distance wins and each event is used
/// at most once.
inline ScoreReport score(const std::vector<LifecycleEvent>& detected, const GroundTruth& truth,
                         Tick tolerance) {
    if (tolerance < 0) throw std::invalid_argument("score: tolerance must be >= 0");

    ScoreReport report;
    for (EventKind kind : {EventKind::Start, EventKind::Enter, EventKind::Leave, EventKind::Merge,
                           EventKind::Split, EventKind::End}) {
        struct Item {
            Tick tick;
            std::size_t cardinality;
        };
        std::vector<Item> truths;
        for (const TruthEvent& e : truth.events)
            if (e.kind == kind) truths.push_back(Item{e.tick, e.cardinality});
        std::vector<Item> found;
        for (const LifecycleEvent& e : detected)
            if (e.kind == kind)
                found.push_back(Item{
                    e.tick, e.trajectory_participants.size() + e.cluster_participants.size()});

        struct Pair {
            Tick distance;
            std::size_t truth_index;
            std::size_t found_index;
        };
        std::vector<Pair> pairs;
        for (std::size_t t = 0; t < truths.size(); ++t)
            for (std::size_t f = 0; f < found.size(); ++f) {
                const Tick d = std::abs(truths[t].tick - found[f].tick);
                if (d <= tolerance && truths[t].cardinality == found[f].cardinality)
                    pairs.push_back(Pair{d, t, f});
            }
        std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
            if (a.distance != b.distance) return a.distance < b.distance;
            if (a.truth_index != b.truth_index) return a.truth_index < b.truth_index;
            return a.found_index < b.found_index;
        });
        std::vector<char> truth_used(truths.size(), 0), found_used(found.size(), 0);
        std::size_t matched = 0;
        for (const Pair& p : pairs) {
            if (truth_used[p.truth_index] || found_used[p.found_index]) continue;
            truth_used[p.truth_index] = found_used[p.found_index] = 1;
            ++matched;
        }

        KindScore ks;
        ks.expected = truths.size();
        ks.detected = found.size();
        ks.matched = matched;
        report.per_kind[kind] = ks;
        report.overall.expected += ks.expected;
        report.overall.detected += ks.detected;
        report.overall.matched += ks.matched;
    }
    return report;
}

}  // namespace clusterlife
