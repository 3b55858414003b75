#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clusterlife/clustering.hpp"
#include "clusterlife/core.hpp"
#include "clusterlife/motion.hpp"

namespace clusterlife {

using IdentityId = std::uint64_t;

enum class EventKind { Start, Enter, Leave, Merge, Split, End };

inline const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Start: return "start";
        case EventKind::Enter: return "enter";
        case EventKind::Leave: return "leave";
        case EventKind::Merge: return "merge";
        case EventKind::Split: return "split";
        case EventKind::End: return "end";
    }
    return "?";
}

inline std::optional<EventKind> event_kind_from_name(const std::string& name) {
    for (EventKind k : {EventKind::Start, EventKind::Enter, EventKind::Leave, EventKind::Merge,
                        EventKind::Split, EventKind::End})
        if (name == event_kind_name(k)) return k;
    return std::nullopt;
}

/// One occurrence of a lifecycle relation. Enter/Leave carry trajectory
/// participants, Merge/Split carry cluster-identity participants, Start/End
/// carry none. Movement labels of the subject and of each participant at
/// the event tick are recorded as attributes (they do not gate detection).
struct LifecycleEvent {
    EventKind kind = EventKind::Start;
    Tick tick = 0;
    IdentityId subject = 0;
    std::vector<TrajectoryId> trajectory_participants;
    std::vector<IdentityId> cluster_participants;
    MovementLabel subject_movement = MovementLabel::Move;
    std::vector<MovementLabel> participant_movements;

    friend bool operator==(const LifecycleEvent&, const LifecycleEvent&) = default;
};

/// Canonical event order: tick, then kind (Start < Enter < Leave < Merge <
/// Split < End), then subject.
inline bool event_canonical_less(const LifecycleEvent& a, const LifecycleEvent& b) {
    if (a.tick != b.tick) return a.tick < b.tick;
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    if (a.subject != b.subject) return a.subject < b.subject;
    if (a.trajectory_participants != b.trajectory_participants)
        return a.trajectory_participants < b.trajectory_participants;
    return a.cluster_participants < b.cluster_participants;
}

/// A cluster identity threaded across consecutive timestamps.
struct ClusterLifecycle {
    IdentityId id = 0;
    Tick birth = 0;
    std::optional<Tick> death;  ///< last tick present; empty while alive at the horizon
    std::map<Tick, std::vector<TrajectoryId>> members_by_tick;
    std::vector<LifecycleEvent> events;  ///< tick-ordered; Start first, End (if any) last
    std::optional<std::pair<std::int64_t, std::int64_t>> cell;  ///< set by partitioned runs

    friend bool operator==(const ClusterLifecycle&, const ClusterLifecycle&) = default;
};

/// Number of shared members between two sorted member lists.
inline std::size_t shared_member_count(const std::vector<TrajectoryId>& a,
                                       const std::vector<TrajectoryId>& b) {
    std::size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

/// Two clusters at adjacent timestamps count as the same iff the shared
/// member count strictly exceeds min_shared times EACH cluster's size.
/// Strict inequality matters: a 50/50 split under min_shared = 0.5 is not a
/// continuation.
inline bool same_cluster(const ClusterInstance& c1, const ClusterInstance& c2,
                         double min_shared) {
    const double shared = static_cast<double>(shared_member_count(c1.members, c2.members));
    return shared > min_shared * static_cast<double>(c1.members.size()) &&
           shared > min_shared * static_cast<double>(c2.members.size());
}

enum class TableDirection { PrevToCurr, CurrToPrev };

/// One candidate pairing inside a table: the opposite-frame cluster, the
/// shared count, and the same/partial labels of the pair.
struct CandidateEntry {
    int value_index = 0;          ///< local index in the opposite frame
    std::size_t shared_count = 0;
    double centroid_distance = 0.0;
    bool same = false;
    bool partial = false;         ///< shared >= partial_shared * |key| and value is valid

    friend bool operator==(const CandidateEntry&, const CandidateEntry&) = default;
};

/// Candidate table for one direction: every valid cluster of the key frame
/// maps to the opposite-frame clusters within max_dist_centroid of it.
/// PrevToCurr feeds leave/split/end detection; CurrToPrev feeds
/// enter/merge/start.
struct CandidateTable {
    TableDirection direction = TableDirection::PrevToCurr;
    std::map<int, std::vector<CandidateEntry>> entries;
};

/// Builds both candidate tables for a consecutive frame pair. Only valid
/// clusters participate; each value is labeled same (per same_cluster) and
/// partial (relative to the key's member count).
inline std::pair<CandidateTable, CandidateTable> build_candidate_tables(
    const FrameClustering& prev, const FrameClustering& curr, const AnalysisParams& params) {
    CandidateTable prev_to_curr{TableDirection::PrevToCurr, {}};
    CandidateTable curr_to_prev{TableDirection::CurrToPrev, {}};

    for (const ClusterInstance& p : prev.clusters)
        if (p.valid) prev_to_curr.entries[p.local_index];
    for (const ClusterInstance& c : curr.clusters)
        if (c.valid) curr_to_prev.entries[c.local_index];

    for (const ClusterInstance& p : prev.clusters) {
        if (!p.valid) continue;
        for (const ClusterInstance& c : curr.clusters) {
            if (!c.valid) continue;
            const double d = euclidean_distance(p.centroid, c.centroid);
            if (d > params.max_dist_centroid) continue;
            const std::size_t shared = shared_member_count(p.members, c.members);
            const bool same = same_cluster(p, c, params.min_shared);
            const double pk = static_cast<double>(shared);
            prev_to_curr.entries[p.local_index].push_back(CandidateEntry{
                c.local_index, shared, d, same,
                c.valid && pk >= params.partial_shared * static_cast<double>(p.members.size())});
            curr_to_prev.entries[c.local_index].push_back(CandidateEntry{
                p.local_index, shared, d, same,
                p.valid && pk >= params.partial_shared * static_cast<double>(c.members.size())});
        }
    }
    return {std::move(prev_to_curr), std::move(curr_to_prev)};
}

/// The identity assignment for one frame: which identity each valid curr
/// cluster carries, and which prev/curr pairs are continuations.
struct IdentityResolution {
    std::map<int, IdentityId> curr_identities;
    std::map<int, int> continuation_prev_to_curr;
    std::map<int, int> continuation_curr_to_prev;
    IdentityId next_fresh = 0;  ///< counter value after assigning fresh identities
};

/// Threads identities from prev to curr clusters.
///
/// Same-labeled pairs are matched greedily by greatest shared count, then
/// smallest centroid distance, then smallest local indices, which makes the
/// assignment a partial injection: no identity continues into two curr
/// clusters and no curr cluster inherits twice. Unmatched curr clusters
/// receive fresh identities in ascending local index order.
inline IdentityResolution resolve_identities(const CandidateTable& prev_to_curr,
                                             const FrameClustering& curr,
                                             const std::map<int, IdentityId>& prev_identities,
                                             IdentityId next_fresh) {
    struct SamePair {
        std::size_t shared;
        double dist;
        int prev_index;
        int curr_index;
    };
    std::vector<SamePair> pairs;
    for (const auto& [prev_index, entries] : prev_to_curr.entries)
        for (const CandidateEntry& e : entries)
            if (e.same)
                pairs.push_back(SamePair{e.shared_count, e.centroid_distance, prev_index,
                                         e.value_index});
    std::sort(pairs.begin(), pairs.end(), [](const SamePair& a, const SamePair& b) {
        if (a.shared != b.shared) return a.shared > b.shared;
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.prev_index != b.prev_index) return a.prev_index < b.prev_index;
        return a.curr_index < b.curr_index;
    });

    IdentityResolution res;
    for (const SamePair& pr : pairs) {
        if (res.continuation_prev_to_curr.count(pr.prev_index) ||
            res.continuation_curr_to_prev.count(pr.curr_index))
            continue;
        res.continuation_prev_to_curr[pr.prev_index] = pr.curr_index;
        res.continuation_curr_to_prev[pr.curr_index] = pr.prev_index;
        res.curr_identities[pr.curr_index] = prev_identities.at(pr.prev_index);
    }
    for (const ClusterInstance& c : curr.clusters) {
        if (!c.valid) continue;
        if (!res.curr_identities.count(c.local_index))
            res.curr_identities[c.local_index] = next_fresh++;
    }
    res.next_fresh = next_fresh;
    return res;
}

namespace detail {

inline MovementLabel label_of(const std::map<TrajectoryId, MotionState>& states,
                              const TrajectoryId& id) {
    auto it = states.find(id);
    return it == states.end() ? MovementLabel::Move : it->second.last_movement;
}

inline MovementLabel label_of(const std::map<IdentityId, MotionState>& states, IdentityId id) {
    auto it = states.find(id);
    return it == states.end() ? MovementLabel::Move : it->second.last_movement;
}

/// members of `from` that are in neither `minus_a` nor any of `minus_rest`.
inline std::vector<TrajectoryId> members_minus(
    const std::vector<TrajectoryId>& from, const std::vector<TrajectoryId>& minus_a,
    const std::vector<const std::vector<TrajectoryId>*>& minus_rest) {
    std::set<TrajectoryId> excluded(minus_a.begin(), minus_a.end());
    for (const auto* v : minus_rest) excluded.insert(v->begin(), v->end());
    std::vector<TrajectoryId> out;
    for (const TrajectoryId& id : from)
        if (!excluded.count(id)) out.push_back(id);
    return out;
}

}  // namespace detail

/// Detects the lifecycle relations between a consecutive frame pair, given
/// the candidate tables and the resolved identity assignment.
///
/// - Start: every curr cluster with a fresh identity (including one born of
///   a merge, so each lifecycle opens with a Start).
/// - End: every prev cluster with no continuation, stamped at the curr tick.
/// - Merge: a curr cluster with >= 2 partial predecessors, listing their
///   identities; Split: a prev cluster with >= 2 partial successors.
/// - Enter/Leave: membership differences along a continuation, excluding
///   trajectories that arrived via a merge participant or departed via a
///   split successor.
inline std::vector<LifecycleEvent> detect_events(
    const FrameClustering& prev, const FrameClustering& curr,
    const CandidateTable& prev_to_curr, const CandidateTable& curr_to_prev,
    const std::map<int, IdentityId>& prev_identities, const IdentityResolution& resolution,
    const std::map<TrajectoryId, MotionState>& trajectory_motion,
    const std::map<IdentityId, MotionState>& group_motion) {
    const Tick tick = curr.tick;
    std::vector<LifecycleEvent> events;

    std::map<int, const ClusterInstance*> prev_by_index;
    for (const ClusterInstance& p : prev.clusters)
        if (p.valid) prev_by_index[p.local_index] = &p;
    std::map<int, const ClusterInstance*> curr_by_index;
    for (const ClusterInstance& c : curr.clusters)
        if (c.valid) curr_by_index[c.local_index] = &c;

    auto group_event = [&](EventKind kind, IdentityId subject,
                           std::vector<IdentityId> participants) {
        LifecycleEvent e;
        e.kind = kind;
        e.tick = tick;
        e.subject = subject;
        e.subject_movement = detail::label_of(group_motion, subject);
        std::sort(participants.begin(), participants.end());
        for (IdentityId p : participants)
            e.participant_movements.push_back(detail::label_of(group_motion, p));
        e.cluster_participants = std::move(participants);
        return e;
    };
    auto membership_event = [&](EventKind kind, IdentityId subject,
                                std::vector<TrajectoryId> participants) {
        LifecycleEvent e;
        e.kind = kind;
        e.tick = tick;
        e.subject = subject;
        e.subject_movement = detail::label_of(group_motion, subject);
        for (const TrajectoryId& p : participants)
            e.participant_movements.push_back(detail::label_of(trajectory_motion, p));
        e.trajectory_participants = std::move(participants);
        return e;
    };

    // Curr side: Start, Merge, Enter.
    for (const auto& [curr_index, cluster_ptr] : curr_by_index) {
        const ClusterInstance& c = *cluster_ptr;
        const IdentityId identity = resolution.curr_identities.at(curr_index);

        std::vector<int> partial_preds;
        if (auto it = curr_to_prev.entries.find(curr_index); it != curr_to_prev.entries.end())
            for (const CandidateEntry& e : it->second)
                if (e.partial) partial_preds.push_back(e.value_index);

        const auto cont = resolution.continuation_curr_to_prev.find(curr_index);
        const bool fresh = cont == resolution.continuation_curr_to_prev.end();

        if (fresh) events.push_back(group_event(EventKind::Start, identity, {}));

        if (partial_preds.size() >= 2) {
            std::vector<IdentityId> participants;
            for (int p : partial_preds) participants.push_back(prev_identities.at(p));
            events.push_back(group_event(EventKind::Merge, identity, std::move(participants)));
        }

        if (!fresh) {
            const ClusterInstance& from = *prev_by_index.at(cont->second);
            std::vector<const std::vector<TrajectoryId>*> merge_sources;
            if (partial_preds.size() >= 2)
                for (int p : partial_preds)
                    if (p != cont->second) merge_sources.push_back(&prev_by_index.at(p)->members);
            auto entering = detail::members_minus(c.members, from.members, merge_sources);
            if (!entering.empty())
                events.push_back(
                    membership_event(EventKind::Enter, identity, std::move(entering)));
        }
    }

    // Prev side: Split, Leave, End.
    for (const auto& [prev_index, cluster_ptr] : prev_by_index) {
        const ClusterInstance& p = *cluster_ptr;
        const IdentityId identity = prev_identities.at(prev_index);

        std::vector<int> partial_succs;
        if (auto it = prev_to_curr.entries.find(prev_index); it != prev_to_curr.entries.end())
            for (const CandidateEntry& e : it->second)
                if (e.partial) partial_succs.push_back(e.value_index);

        if (partial_succs.size() >= 2) {
            std::vector<IdentityId> participants;
            for (int s : partial_succs) participants.push_back(resolution.curr_identities.at(s));
            events.push_back(group_event(EventKind::Split, identity, std::move(participants)));
        }

        const auto cont = resolution.continuation_prev_to_curr.find(prev_index);
        if (cont == resolution.continuation_prev_to_curr.end()) {
            events.push_back(group_event(EventKind::End, identity, {}));
        } else {
            const ClusterInstance& into = *curr_by_index.at(cont->second);
            std::vector<const std::vector<TrajectoryId>*> split_sinks;
            if (partial_succs.size() >= 2)
                for (int s : partial_succs)
                    if (s != cont->second) split_sinks.push_back(&curr_by_index.at(s)->members);
            auto leaving = detail::members_minus(p.members, into.members, split_sinks);
            if (!leaving.empty())
                events.push_back(membership_event(EventKind::Leave, identity, std::move(leaving)));
        }
    }

    std::sort(events.begin(), events.end(), event_canonical_less);
    return events;
}

/// Groups a tick-ordered event stream into one lifecycle per identity.
/// An identity is alive (no death tick) iff it has no End event; otherwise
/// death is the last tick it had members.
inline std::vector<ClusterLifecycle> assemble_lifecycles(
    const std::vector<LifecycleEvent>& events,
    const std::map<IdentityId, std::map<Tick, std::vector<TrajectoryId>>>& memberships) {
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].tick < events[i - 1].tick)
            throw std::invalid_argument("assemble_lifecycles: events out of tick order");

    std::map<IdentityId, ClusterLifecycle> by_identity;
    for (const auto& [id, history] : memberships) {
        ClusterLifecycle lc;
        lc.id = id;
        lc.members_by_tick = history;
        if (!history.empty()) lc.birth = history.begin()->first;
        by_identity.emplace(id, std::move(lc));
    }
    for (const LifecycleEvent& e : events) {
        auto it = by_identity.find(e.subject);
        if (it == by_identity.end()) {
            ClusterLifecycle lc;
            lc.id = e.subject;
            lc.birth = e.tick;
            it = by_identity.emplace(e.subject, std::move(lc)).first;
        }
        it->second.events.push_back(e);
    }
    std::vector<ClusterLifecycle> out;
    out.reserve(by_identity.size());
    for (auto& [id, lc] : by_identity) {
        std::sort(lc.events.begin(), lc.events.end(), event_canonical_less);
        const bool ended = std::any_of(lc.events.begin(), lc.events.end(),
                                       [](const LifecycleEvent& e) { return e.kind == EventKind::End; });
        if (ended && !lc.members_by_tick.empty())
            lc.death = lc.members_by_tick.rbegin()->first;
        out.push_back(std::move(lc));
    }
    std::sort(out.begin(), out.end(), [](const ClusterLifecycle& a, const ClusterLifecycle& b) {
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.id < b.id;
    });
    return out;
}

/// The combined output of one analysis run.
struct AnalysisResult {
    std::vector<ClusterLifecycle> lifecycles;      ///< ordered by (birth, id)
    std::vector<LifecycleEvent> events;            ///< canonical order
    std::map<Tick, std::size_t> border_counts;     ///< per-tick border-affected clusters (partitioned runs)
    Tick first_tick = 0;
    Tick last_tick = 0;
};

/// Advances identity threading and event detection one frame at a time.
/// Frames must arrive in increasing tick order, one per universal tick;
/// clusterings are expected to be validity-filtered.
class LifecycleEngine {
  public:
    explicit LifecycleEngine(AnalysisParams params) : params_(params.normalized()) {}

    void advance(const SampledFrame& frame, const FrameClustering& clustering) {
        if (frame.tick != clustering.tick)
            throw std::invalid_argument("LifecycleEngine: frame/clustering tick mismatch");
        if (has_prev_ && frame.tick <= prev_.tick)
            throw std::invalid_argument("LifecycleEngine: frames out of tick order");
        if (!has_prev_) first_tick_ = frame.tick;
        last_tick_ = frame.tick;

        advance_trajectory_motion(frame);

        FrameClustering no_prev;
        no_prev.tick = frame.tick - params_.interval;
        const FrameClustering& prev = has_prev_ ? prev_ : no_prev;
        auto [prev_to_curr, curr_to_prev] = build_candidate_tables(prev, clustering, params_);
        IdentityResolution res =
            resolve_identities(prev_to_curr, clustering, prev_identities_, next_identity_);
        next_identity_ = res.next_fresh;

        for (const ClusterInstance& c : clustering.clusters) {
            if (!c.valid) continue;
            const IdentityId identity = res.curr_identities.at(c.local_index);
            auto [label, state] = classify_group(group_motion_[identity], c.centroid, params_);
            group_motion_[identity] = state;
            memberships_[identity][frame.tick] = c.members;
        }

        auto events = detect_events(prev, clustering, prev_to_curr, curr_to_prev,
                                    prev_identities_, res, trajectory_motion_, group_motion_);
        events_.insert(events_.end(), events.begin(), events.end());

        prev_ = clustering;
        prev_identities_ = std::move(res.curr_identities);
        has_prev_ = true;
    }

    AnalysisResult finish() const {
        AnalysisResult out;
        out.events = events_;
        out.lifecycles = assemble_lifecycles(events_, memberships_);
        out.first_tick = first_tick_;
        out.last_tick = last_tick_;
        return out;
    }

    const std::map<TrajectoryId, MotionState>& trajectory_motion() const {
        return trajectory_motion_;
    }

  private:
    void advance_trajectory_motion(const SampledFrame& frame) {
        for (const auto& [id, point] : frame.positions) {
            auto it = last_point_.find(id);
            if (it == last_point_.end()) {
                trajectory_motion_[id] = MotionState{};  // first observation: Move, no anchor
            } else {
                auto [label, state] =
                    classify_point(trajectory_motion_[id], it->second, point, params_);
                trajectory_motion_[id] = state;
            }
            last_point_[id] = point;
        }
    }

    AnalysisParams params_;
    bool has_prev_ = false;
    FrameClustering prev_;
    std::map<int, IdentityId> prev_identities_;
    IdentityId next_identity_ = 0;
    std::map<TrajectoryId, MotionState> trajectory_motion_;
    std::map<TrajectoryId, TrajectoryPoint> last_point_;
    std::map<IdentityId, MotionState> group_motion_;
    std::map<IdentityId, std::map<Tick, std::vector<TrajectoryId>>> memberships_;
    std::vector<LifecycleEvent> events_;
    Tick first_tick_ = 0;
    Tick last_tick_ = 0;
};

/// Runs the sequential pipeline over pre-resampled frames:
/// cluster -> validity filter -> identity threading -> events -> lifecycles.
inline AnalysisResult analyze_frames(const std::vector<SampledFrame>& frames,
                                     const AnalysisParams& raw_params) {
    const AnalysisParams params = raw_params.normalized();
    LifecycleEngine engine(params);
    for (const SampledFrame& frame : frames)
        engine.advance(frame, filter_valid(cluster_frame(frame, params), params));
    return engine.finish();
}

/// Lifecycle answers to the question catalog: counts, lifetimes, sizes,
/// event tallies, formation/disappearance rates, member persistence.
struct LifecycleStatistics {
    std::size_t lifecycle_count = 0;
    std::size_t completed_count = 0;
    std::size_t alive_count = 0;  ///< right-censored at the horizon
    double lifetime_min = 0.0, lifetime_mean = 0.0, lifetime_max = 0.0;
    double censored_min = 0.0, censored_mean = 0.0, censored_max = 0.0;
    double mean_cluster_size = 0.0;  ///< mean over lifecycles of their mean member count
    std::array<std::size_t, 6> event_counts{};  ///< indexed by EventKind
    double formation_rate = 0.0;     ///< Starts per tick of horizon
    double disappearance_rate = 0.0; ///< Ends per tick of horizon
    double mean_member_persistence = 0.0;  ///< ticks present / lifecycle frame count, averaged
    Tick horizon = 0;

    friend bool operator==(const LifecycleStatistics&, const LifecycleStatistics&) = default;
};

inline LifecycleStatistics lifecycle_statistics(const std::vector<ClusterLifecycle>& lifecycles,
                                                Tick horizon) {
    LifecycleStatistics s;
    s.horizon = horizon;
    s.lifecycle_count = lifecycles.size();

    double lifetime_sum = 0.0, censored_sum = 0.0, size_sum = 0.0;
    double persistence_sum = 0.0;
    std::size_t persistence_terms = 0, sized = 0;

    for (const ClusterLifecycle& lc : lifecycles) {
        for (const LifecycleEvent& e : lc.events)
            ++s.event_counts[static_cast<std::size_t>(e.kind)];

        const Tick span_end =
            lc.death ? *lc.death
                     : (lc.members_by_tick.empty() ? lc.birth : lc.members_by_tick.rbegin()->first);
        const double span = static_cast<double>(span_end - lc.birth);
        if (lc.death) {
            if (s.completed_count == 0) {
                s.lifetime_min = s.lifetime_max = span;
            } else {
                s.lifetime_min = std::min(s.lifetime_min, span);
                s.lifetime_max = std::max(s.lifetime_max, span);
            }
            ++s.completed_count;
            lifetime_sum += span;
        } else {
            const double censored = static_cast<double>(horizon - lc.birth);
            if (s.alive_count == 0) {
                s.censored_min = s.censored_max = censored;
            } else {
                s.censored_min = std::min(s.censored_min, censored);
                s.censored_max = std::max(s.censored_max, censored);
            }
            ++s.alive_count;
            censored_sum += censored;
        }

        if (!lc.members_by_tick.empty()) {
            double total = 0.0;
            std::map<TrajectoryId, std::size_t> presence;
            for (const auto& [tick, members] : lc.members_by_tick) {
                total += static_cast<double>(members.size());
                for (const TrajectoryId& id : members) ++presence[id];
            }
            size_sum += total / static_cast<double>(lc.members_by_tick.size());
            ++sized;
            for (const auto& [id, ticks_present] : presence) {
                persistence_sum += static_cast<double>(ticks_present) /
                                   static_cast<double>(lc.members_by_tick.size());
                ++persistence_terms;
            }
        }
    }

    if (s.completed_count > 0)
        s.lifetime_mean = lifetime_sum / static_cast<double>(s.completed_count);
    if (s.alive_count > 0) s.censored_mean = censored_sum / static_cast<double>(s.alive_count);
    if (sized > 0) s.mean_cluster_size = size_sum / static_cast<double>(sized);
    if (persistence_terms > 0)
        s.mean_member_persistence = persistence_sum / static_cast<double>(persistence_terms);
    if (horizon > 0) {
        s.formation_rate =
            static_cast<double>(s.event_counts[static_cast<std::size_t>(EventKind::Start)]) /
            static_cast<double>(horizon);
        s.disappearance_rate =
            static_cast<double>(s.event_counts[static_cast<std::size_t>(EventKind::End)]) /
            static_cast<double>(horizon);
    }
    return s;
}

/// Renames identities into a canonical sequence ordered by (birth tick,
/// first member set), rewriting events and participants to match. Two runs
/// of the same analysis that differ only in identity numbering compare
/// equal after this.
inline void relabel_canonical(AnalysisResult& result) {
    struct Key {
        Tick birth;
        const std::vector<TrajectoryId>* first_members;
        IdentityId old_id;
    };
    static const std::vector<TrajectoryId> kNoMembers;
    std::vector<Key> keys;
    keys.reserve(result.lifecycles.size());
    for (const ClusterLifecycle& lc : result.lifecycles)
        keys.push_back(Key{lc.birth,
                           lc.members_by_tick.empty() ? &kNoMembers
                                                      : &lc.members_by_tick.begin()->second,
                           lc.id});
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        if (a.birth != b.birth) return a.birth < b.birth;
        if (*a.first_members != *b.first_members) return *a.first_members < *b.first_members;
        return a.old_id < b.old_id;
    });
    std::map<IdentityId, IdentityId> rename;
    for (std::size_t i = 0; i < keys.size(); ++i) rename[keys[i].old_id] = i;

    auto rewrite_event = [&rename](LifecycleEvent& e) {
        e.subject = rename.at(e.subject);
        std::vector<std::pair<IdentityId, MovementLabel>> pairs;
        if (!e.cluster_participants.empty()) {
            for (std::size_t i = 0; i < e.cluster_participants.size(); ++i)
                pairs.emplace_back(rename.at(e.cluster_participants[i]),
                                   e.participant_movements[i]);
            std::sort(pairs.begin(), pairs.end());
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                e.cluster_participants[i] = pairs[i].first;
                e.participant_movements[i] = pairs[i].second;
            }
        }
    };

    for (ClusterLifecycle& lc : result.lifecycles) {
        lc.id = rename.at(lc.id);
        for (LifecycleEvent& e : lc.events) rewrite_event(e);
        std::sort(lc.events.begin(), lc.events.end(), event_canonical_less);
    }
    for (LifecycleEvent& e : result.events) rewrite_event(e);
    std::sort(result.events.begin(), result.events.end(), event_canonical_less);
    std::sort(result.lifecycles.begin(), result.lifecycles.end(),
              [](const ClusterLifecycle& a, const ClusterLifecycle& b) {
                  if (a.birth != b.birth) return a.birth < b.birth;
                  return a.id < b.id;
              });
}

}  // namespace clusterlife
