// Minimal library walkthrough: plant a split scenario, run the pipeline,
// print the event stream.
#include <cstdio>

#include "clusterlife/clusterlife.hpp"

int main() {
    using namespace clusterlife;

    ScenarioSpec spec;
    spec.kind = ScenarioKind::Split;
    spec.members_per_cluster = 8;
    spec.horizon = 20;
    spec.seed = 42;

    const auto scenario = generate(spec);
    const auto params = spec.recommended_params();
    const auto frames = resample(scenario.trajectories, params);
    const auto result = analyze_frames(frames, params);

    std::printf("%zu trajectories, %zu frames, %zu lifecycles\n", scenario.trajectories.size(),
                frames.size(), result.lifecycles.size());
    for (const auto& e : result.events) {
        std::printf("t=%-3lld %-6s cluster %llu", static_cast<long long>(e.tick),
                    event_kind_name(e.kind), static_cast<unsigned long long>(e.subject));
        if (!e.cluster_participants.empty()) {
            std::printf("  participants:");
            for (IdentityId id : e.cluster_participants)
                std::printf(" %llu", static_cast<unsigned long long>(id));
        }
        if (!e.trajectory_participants.empty()) {
            std::printf("  trajectories:");
            for (const auto& id : e.trajectory_participants) std::printf(" %s", id.c_str());
        }
        std::printf("  [%s]\n", movement_name(e.subject_movement));
    }

    const auto stats =
        lifecycle_statistics(result.lifecycles, result.last_tick - result.first_tick);
    std::printf("starts=%zu ends=%zu splits=%zu\n",
                stats.event_counts[static_cast<std::size_t>(EventKind::Start)],
                stats.event_counts[static_cast<std::size_t>(EventKind::End)],
                stats.event_counts[static_cast<std::size_t>(EventKind::Split)]);
    return 0;
}
