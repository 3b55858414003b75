#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "clusterlife/motion.hpp"
#include "oracles.hpp"

using namespace clusterlife;

namespace {

AnalysisParams motion_params(double r_e, double r_n) {
    AnalysisParams p;
    p.r_e = r_e;
    p.r_n = r_n;
    p.r_g_error = r_e;
    p.eps = r_n;
    p.max_dist_centroid = 10.0 * r_n;
    return p;
}

/// Feeds a whole point history through the incremental classifier.
std::vector<MovementLabel> run_point_machine(const std::vector<TrajectoryPoint>& points,
                                             const AnalysisParams& params) {
    std::vector<MovementLabel> labels{MovementLabel::Move};
    MotionState state;
    for (std::size_t k = 1; k < points.size(); ++k) {
        auto [label, next] = classify_point(state, points[k - 1], points[k], params);
        labels.push_back(label);
        state = next;
    }
    return labels;
}

}  // namespace

TEST_CASE("classify_point direct rules") {
    const AnalysisParams params = motion_params(1.0, 5.0);

    SECTION("zero displacement after moving is a stop") {
        const MotionState moving;  // Move, no anchor
        auto [label, state] =
            classify_point(moving, {4.0, 4.0, 3}, {4.0, 4.0, 4}, params);
        CHECK(label == MovementLabel::Stop);
        REQUIRE(state.stop_anchor.has_value());
        CHECK(state.stop_anchor->tick == 4);
        CHECK(state.stop_anchor->point == TrajectoryPoint{4.0, 4.0, 3});
    }
    SECTION("escaping the neighborhood is a move") {
        MotionState stopped;
        stopped.last_movement = MovementLabel::Stop;
        stopped.stop_anchor = StopAnchor{1, {0.0, 0.0, 0}};
        auto [label, state] = classify_point(stopped, {0.0, 0.0, 1}, {10.0, 0.0, 2}, params);
        CHECK(label == MovementLabel::Move);
        CHECK(state.stop_anchor == stopped.stop_anchor);  // anchor survives the move
    }
    SECTION("the gap between r_e and r_n retains the previous label") {
        MotionState stopped;
        stopped.last_movement = MovementLabel::Stop;
        stopped.stop_anchor = StopAnchor{1, {0.0, 0.0, 0}};
        auto [label, state] = classify_point(stopped, {0.0, 0.0, 1}, {3.0, 0.0, 2}, params);
        CHECK(label == MovementLabel::Stop);  // 1 < 3 <= r_n, neither rule fires
        CHECK(state.stop_anchor == stopped.stop_anchor);
    }
    SECTION("non-increasing ticks are rejected") {
        CHECK_THROWS_AS(classify_point(MotionState{}, {0, 0, 5}, {1, 1, 5}, params),
                        std::invalid_argument);
    }
}

TEST_CASE("classify_point matches the rule replay on a jittered walk") {
    const AnalysisParams params = motion_params(1.0, 3.0);
    // 12 points: drift, linger, burst, linger
    const std::vector<TrajectoryPoint> walk = {
        {0.0, 0.0, 0},  {0.4, 0.1, 1},  {0.6, 0.2, 2},  {0.7, 0.1, 3},
        {5.0, 0.0, 4},  {5.2, 0.1, 5},  {5.1, 0.3, 6},  {9.9, 4.0, 7},
        {10.0, 4.1, 8}, {10.2, 4.0, 9}, {10.1, 3.9, 10}, {15.0, 9.0, 11}};
    CHECK(run_point_machine(walk, params) == oracles::replay_point_labels(walk, params));
}

TEST_CASE("classify_point matches the rule replay on random walks") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> step(-2.5, 2.5);
    for (int round = 0; round < 50; ++round) {
        const AnalysisParams params = motion_params(0.5 + (rng() % 3) * 0.5, 2.0 + (rng() % 3));
        std::vector<TrajectoryPoint> points{{0.0, 0.0, 0}};
        for (Tick k = 1; k < 40; ++k) {
            const auto& prev = points.back();
            points.push_back({prev.x + step(rng), prev.y + step(rng), k});
        }
        REQUIRE(run_point_machine(points, params) == oracles::replay_point_labels(points, params));
    }
}

TEST_CASE("a trajectory inside a small disc stops after its first transition") {
    const AnalysisParams params = motion_params(1.0, 3.0);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    std::vector<TrajectoryPoint> points;
    for (Tick k = 0; k < 25; ++k) points.push_back({jitter(rng), jitter(rng), k});

    const auto labels = run_point_machine(points, params);
    CHECK(labels[0] == MovementLabel::Move);
    for (std::size_t k = 1; k < labels.size(); ++k) CHECK(labels[k] == MovementLabel::Stop);
}

TEST_CASE("classification is deterministic and anchors move only on Move->Stop") {
    const AnalysisParams params = motion_params(1.0, 3.0);
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> step(-2.0, 2.0);
    std::vector<TrajectoryPoint> points{{0.0, 0.0, 0}};
    for (Tick k = 1; k < 60; ++k)
        points.push_back({points.back().x + step(rng), points.back().y + step(rng), k});

    CHECK(run_point_machine(points, params) == run_point_machine(points, params));

    MotionState state;
    for (std::size_t k = 1; k < points.size(); ++k) {
        const MotionState before = state;
        auto [label, next] = classify_point(state, points[k - 1], points[k], params);
        const bool transition =
            before.last_movement == MovementLabel::Move && label == MovementLabel::Stop;
        if (!transition) CHECK(next.stop_anchor == before.stop_anchor);
        state = next;
    }
}

TEST_CASE("classify_group basics") {
    const AnalysisParams params = motion_params(1.0, 3.0);

    SECTION("stationary centroid stops at every subsequent tick") {
        MotionState state;
        auto [first, s0] = classify_group(state, {5.0, 5.0, 0}, params);
        CHECK(first == MovementLabel::Move);
        state = s0;
        for (Tick t = 1; t < 10; ++t) {
            auto [label, next] = classify_group(state, {5.0, 5.0, t}, params);
            CHECK(label == MovementLabel::Stop);
            state = next;
        }
    }
    SECTION("a displaced centroid moves") {
        MotionState state;
        state = classify_group(state, {0.0, 0.0, 0}, params).second;
        auto [label, next] = classify_group(state, {5.0, 0.0, 1}, params);
        CHECK(label == MovementLabel::Move);
    }
}

TEST_CASE("classify_group matches the group predicate replay") {
    std::mt19937 rng(202);
    std::uniform_real_distribution<double> step(-1.5, 1.5);
    for (int round = 0; round < 40; ++round) {
        const AnalysisParams params = motion_params(0.4 + (rng() % 4) * 0.3, 5.0);
        std::vector<TrajectoryPoint> centroids{{0.0, 0.0, 0}};
        for (Tick k = 1; k < 30; ++k)
            centroids.push_back(
                {centroids.back().x + step(rng), centroids.back().y + step(rng), k});

        std::vector<MovementLabel> got;
        MotionState state;
        for (const TrajectoryPoint& c : centroids) {
            auto [label, next] = classify_group(state, c, params);
            got.push_back(label);
            state = next;
        }
        REQUIRE(got == oracles::replay_group_labels(centroids, params));
    }
}
