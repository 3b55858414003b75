#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "clusterlife/core.hpp"

namespace clusterlife {

enum class MovementLabel { Stop, Move };

inline const char* movement_name(MovementLabel m) {
    return m == MovementLabel::Stop ? "stop" : "move";
}

/// Where the entity's most recent stop began.
struct StopAnchor {
    Tick tick = 0;
    TrajectoryPoint point;

    friend bool operator==(const StopAnchor&, const StopAnchor&) = default;
};

/// Per-entity stop/move state. A fresh entity starts as Move with no
/// anchor; the anchor exists whenever the entity is stopped.
struct MotionState {
    MovementLabel last_movement = MovementLabel::Move;
    std::optional<StopAnchor> stop_anchor;

    friend bool operator==(const MotionState&, const MotionState&) = default;
};

/// Classifies one trajectory step.
///
/// Stop when the previous label was Move and the step stays within r_e, or
/// the previous label was Stop and the point stays within r_e of the stop
/// anchor. Move when the point is beyond r_n of the anchor and the step
/// exceeds r_e. In the gap between r_e and r_n where neither rule fires,
/// the previous label is retained. A Move->Stop transition anchors the stop
/// at (curr tick, prev point) - the place where motion ceased.
inline std::pair<MovementLabel, MotionState> classify_point(const MotionState& prev_state,
                                                            const TrajectoryPoint& prev_point,
                                                            const TrajectoryPoint& curr_point,
                                                            const AnalysisParams& params) {
    if (curr_point.tick <= prev_point.tick)
        throw std::invalid_argument("classify_point: ticks must strictly increase");

    const double step = euclidean_distance(prev_point, curr_point);
    const double anchor_dist =
        prev_state.stop_anchor
            ? euclidean_distance(prev_state.stop_anchor->point, curr_point)
            : std::numeric_limits<double>::infinity();
    const bool was_moving = prev_state.last_movement == MovementLabel::Move;

    MovementLabel label = prev_state.last_movement;
    if (was_moving && step <= params.r_e) {
        label = MovementLabel::Stop;
    } else if (!was_moving && anchor_dist <= params.r_e) {
        label = MovementLabel::Stop;
    } else if (anchor_dist > params.r_n && step > params.r_e) {
        label = MovementLabel::Move;
    }

    MotionState next = prev_state;
    next.last_movement = label;
    if (was_moving && label == MovementLabel::Stop)
        next.stop_anchor = StopAnchor{curr_point.tick, prev_point};
    return {label, next};
}

/// Classifies a group centroid: Stop iff it stays within r_g_error of the
/// group's stop anchor.
///
/// A fresh identity is labeled Move and anchored at its first centroid.
/// While the group moves, the anchor trails the latest centroid (the
/// candidate start of the next stop); it freezes for the duration of a
/// stop, so a stop ends only when the centroid escapes r_g_error of the
/// place where the stop began.
inline std::pair<MovementLabel, MotionState> classify_group(const MotionState& prev_state,
                                                            const TrajectoryPoint& curr_centroid,
                                                            const AnalysisParams& params) {
    MotionState next = prev_state;
    if (!prev_state.stop_anchor) {
        next.last_movement = MovementLabel::Move;
        next.stop_anchor = StopAnchor{curr_centroid.tick, curr_centroid};
        return {MovementLabel::Move, next};
    }
    if (curr_centroid.tick <= prev_state.stop_anchor->tick)
        throw std::invalid_argument("classify_group: centroid ticks must strictly increase");

    const double d = euclidean_distance(prev_state.stop_anchor->point, curr_centroid);
    const MovementLabel label = d <= params.r_g_error ? MovementLabel::Stop : MovementLabel::Move;
    next.last_movement = label;
    if (label == MovementLabel::Move)
        next.stop_anchor = StopAnchor{curr_centroid.tick, curr_centroid};
    return {label, next};
}

}  // namespace clusterlife
