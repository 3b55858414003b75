// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Oracles here are independent recomputations (see oracles.hpp).
#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "clusterlife/clusterlife.hpp"
#include "oracles.hpp"

using namespace clusterlife;

namespace {

int failures = 0;

void report(int number, const char* title, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", number, title,
                detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string renaming_signature(AnalysisResult result) {
    for (auto& lc : result.lifecycles) lc.cell.reset();
    result.border_counts.clear();
    relabel_canonical(result);
    const auto stats =
        lifecycle_statistics(result.lifecycles, result.last_tick - result.first_tick);
    return serialize_results(result, stats);
}

// --- criterion 1: clustering equals a quadratic reference DBSCAN ----------

void criterion_clustering_oracle() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(20240601);
    std::uniform_real_distribution<double> coord(0.0, 40.0);

    int mismatches = 0;
    for (int round = 0; round < 200; ++round) {
        const int n = 1 + static_cast<int>(rng() % 200);
        const double eps = 0.5 + static_cast<double>(rng() % 40) / 10.0;
        const int min_pts = 1 + static_cast<int>(rng() % 6);

        SampledFrame frame;
        frame.tick = round;
        for (int i = 0; i < n; ++i) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "p%04d", i);
            frame.positions.emplace(buf, TrajectoryPoint{coord(rng), coord(rng), frame.tick});
        }
        AnalysisParams params;
        params.eps = eps;
        params.min_pts = min_pts;
        const auto impl = cluster_frame(frame, params);
        const auto ref = oracles::reference_dbscan(frame, eps, min_pts);
        if (!oracles::clustering_matches_reference(impl, ref)) ++mismatches;
    }
    const double elapsed = seconds_since(start);
    report(1, "clustering oracle equivalence", mismatches == 0 && elapsed < 5.0,
           "200 frames, " + std::to_string(mismatches) + " mismatches, " +
               std::to_string(elapsed) + " s");
}

// --- criterion 2: shared-membership similarity fidelity --------------------

ClusterInstance cluster_with(const std::vector<TrajectoryId>& members) {
    ClusterInstance c;
    c.members = members;
    std::sort(c.members.begin(), c.members.end());
    c.valid = true;
    return c;
}

void criterion_similarity() {
    std::vector<TrajectoryId> base;
    for (int i = 1; i <= 10; ++i) base.push_back("e" + std::to_string(100 + i));

    // 10-element cluster vs. its 8-element subset: the same at 0.5
    const auto ten = cluster_with(base);
    const auto eight = cluster_with({base.begin(), base.begin() + 8});
    bool ok = same_cluster(ten, eight, 0.5);

    // 14-element cluster sharing only 4: not the same
    std::vector<TrajectoryId> fourteen(base.begin(), base.begin() + 4);
    for (int i = 0; i < 10; ++i) fourteen.push_back("z" + std::to_string(200 + i));
    ok = ok && !same_cluster(ten, cluster_with(fourteen), 0.5);

    std::mt19937 rng(555);
    int disagreements = 0, asymmetries = 0;
    for (int round = 0; round < 10000; ++round) {
        std::vector<TrajectoryId> ma, mb;
        for (int i = 0; i < 24; ++i) {
            if (rng() % 2) ma.push_back("e" + std::to_string(i));
            if (rng() % 2) mb.push_back("e" + std::to_string(i));
        }
        if (ma.empty()) ma.push_back("only-a");
        if (mb.empty()) mb.push_back("only-b");
        const double min_shared = (1 + rng() % 99) / 100.0;
        const auto a = cluster_with(ma);
        const auto b = cluster_with(mb);
        const bool got = same_cluster(a, b, min_shared);
        if (got != oracles::same_cluster_direct(a.members, b.members, min_shared))
            ++disagreements;
        if (got != same_cluster(b, a, min_shared)) ++asymmetries;
    }
    ok = ok && disagreements == 0 && asymmetries == 0;
    report(2, "shared-membership similarity fidelity", ok,
           "2 reference scenarios + 10000 random pairs, " + std::to_string(disagreements) +
               " disagreements, " + std::to_string(asymmetries) + " asymmetries");
}

// --- criterion 3: planted-event recovery -----------------------------------

void criterion_planted_events() {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioKind kinds[] = {ScenarioKind::Split, ScenarioKind::Merge, ScenarioKind::Churn,
                                  ScenarioKind::Stable, ScenarioKind::Crossing};
    int imperfect = 0;
    for (ScenarioKind kind : kinds) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            ScenarioSpec spec;
            spec.kind = kind;
            spec.cluster_count = 2;
            spec.members_per_cluster = 6 + static_cast<int>(seed % 5);
            spec.horizon = 16 + static_cast<Tick>(seed % 9);
            spec.noise_count = static_cast<int>(seed % 4);
            spec.seed = seed;
            const auto gen = generate(spec);
            const auto params = spec.recommended_params();
            const auto result = analyze_frames(resample(gen.trajectories, params), params);
            const auto rep = score(result.events, gen.truth, params.interval);
            for (const auto& [event_kind, ks] : rep.per_kind)
                if (ks.precision() != 1.0 || ks.recall() != 1.0) {
                    ++imperfect;
                    break;
                }
        }
    }
    const double elapsed = seconds_since(start);
    report(3, "planted-event recovery", imperfect == 0 && elapsed < 60.0,
           "500 scenarios, " + std::to_string(imperfect) + " imperfect, " +
               std::to_string(elapsed) + " s");
}

// --- criterion 4: parallel determinism --------------------------------------

void criterion_parallel_determinism() {
    const ScenarioKind kinds[] = {ScenarioKind::Stable, ScenarioKind::Split, ScenarioKind::Merge,
                                  ScenarioKind::Crossing};
    int mismatches = 0, unstable = 0;
    for (ScenarioKind kind : kinds) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            ScenarioSpec spec;
            spec.kind = kind;
            spec.cluster_count = 3;
            spec.members_per_cluster = 8;
            spec.horizon = 16;
            spec.noise_count = 3;
            spec.seed = seed;
            const auto gen = generate(spec);
            AnalysisParams params = spec.recommended_params();
            params.grid_cell = spec.scale;  // planted sites sit >= 2 eps inside cells
            params.halo = 2.0 * params.eps;
            const auto frames = resample(gen.trajectories, params);

            const std::string plain = renaming_signature(analyze_frames(frames, params));
            std::string first_raw;
            for (int workers : {1, 2, 5, 8}) {
                const auto part = run_partitioned(frames, params, workers);
                if (renaming_signature(part) != plain) ++mismatches;
                const auto stats =
                    lifecycle_statistics(part.lifecycles, part.last_tick - part.first_tick);
                const std::string raw = serialize_results(part, stats);
                if (first_raw.empty())
                    first_raw = raw;
                else if (raw != first_raw)
                    ++unstable;
            }
            const auto again = run_partitioned(frames, params, 8);
            const auto stats =
                lifecycle_statistics(again.lifecycles, again.last_tick - again.first_tick);
            if (serialize_results(again, stats) != first_raw) ++unstable;
        }
    }
    report(4, "parallel determinism and equivalence", mismatches == 0 && unstable == 0,
           "20 datasets x workers {1,2,5,8}: " + std::to_string(mismatches) +
               " plain-run mismatches, " + std::to_string(unstable) + " unstable reruns");
}

// --- criterion 5: border-effect measurement ---------------------------------

void criterion_border_effect() {
    const double grid = 10.0;
    const Tick horizon = 12, move_tick = 6;
    std::vector<Trajectory> trajectories;
    const double pi = std::acos(-1.0);
    for (int j = 0; j < 8; ++j) {
        const double angle = pi / 8 + j * pi / 4;
        Trajectory t;
        t.id = "m" + std::to_string(j);
        for (Tick tick = 0; tick < horizon; ++tick) {
            const double cx = (tick < move_tick ? grid / 2 : grid) + 0.1 * std::cos(angle);
            t.points.push_back({cx, grid / 2 + 0.1 * std::sin(angle), tick});
        }
        trajectories.push_back(std::move(t));
    }
    AnalysisParams params;
    params.eps = 1.0;
    params.r_e = 0.5;
    params.r_n = 2.0;
    params.r_g_error = 0.5;
    params.max_dist_centroid = 6.0;
    params.grid_cell = grid;
    params.halo = 0.0;
    const auto frames = resample(trajectories, params);

    const auto raw = run_partitioned(frames, params, 2);
    bool ok = true;
    for (Tick t = 0; t < move_tick; ++t)
        if (raw.border_counts.count(t)) ok = false;
    for (Tick t = move_tick; t < horizon; ++t)
        if (!raw.border_counts.count(t) || raw.border_counts.at(t) == 0) ok = false;

    params.halo = 2.0 * params.eps;
    const auto mitigated = run_partitioned(frames, params, 2);
    std::size_t residual = 0;
    for (const auto& [tick, count] : mitigated.border_counts) residual += count;
    ok = ok && residual == 0;

    std::size_t raw_total = 0;
    for (const auto& [tick, count] : raw.border_counts) raw_total += count;
    report(5, "border-effect measurement", ok,
           "halo 0 flags " + std::to_string(raw_total) + " cluster-ticks on straddle ticks only; "
               "halo 2*eps leaves " + std::to_string(residual));
}

// --- criterion 6: event balance ---------------------------------------------

void criterion_event_balance() {
    const ScenarioKind kinds[] = {ScenarioKind::Stable, ScenarioKind::Split, ScenarioKind::Merge,
                                  ScenarioKind::Churn, ScenarioKind::Crossing, ScenarioKind::Mixed};
    int violations = 0;
    int checked = 0;
    for (ScenarioKind kind : kinds) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            ScenarioSpec spec;
            spec.kind = kind;
            spec.cluster_count = kind == ScenarioKind::Mixed ? 4 + static_cast<int>(seed % 3)
                                                             : 1 + static_cast<int>(seed % 3);
            if (kind == ScenarioKind::Merge || kind == ScenarioKind::Crossing)
                spec.cluster_count = std::max(spec.cluster_count, 2);
            spec.members_per_cluster = 6 + static_cast<int>(seed % 4);
            spec.horizon = 14 + static_cast<Tick>(seed % 10);
            spec.noise_count = static_cast<int>(seed % 3);
            spec.seed = seed;
            const auto gen = generate(spec);
            const auto params = spec.recommended_params();
            const auto result = analyze_frames(resample(gen.trajectories, params), params);
            ++checked;

            std::size_t starts = 0, ends = 0, alive = 0;
            for (const auto& e : result.events) {
                if (e.kind == EventKind::Start) ++starts;
                if (e.kind == EventKind::End) ++ends;
            }
            std::map<IdentityId, const ClusterLifecycle*> by_id;
            for (const auto& lc : result.lifecycles) {
                by_id[lc.id] = &lc;
                if (!lc.death) ++alive;
            }
            if (starts - ends != alive) ++violations;
            for (const auto& e : result.events) {
                if (e.kind != EventKind::Enter && e.kind != EventKind::Leave) continue;
                const auto& lc = *by_id.at(e.subject);
                const Tick death = lc.death ? *lc.death : result.last_tick;
                if (e.tick < lc.birth || e.tick > death) ++violations;
            }
        }
    }
    report(6, "event balance and membership-window invariants", violations == 0,
           std::to_string(checked) + " scenarios, " + std::to_string(violations) + " violations");
}

// --- criterion 7: desk-scale throughput --------------------------------------

void criterion_throughput() {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::Stable;
    spec.cluster_count = 10;
    spec.members_per_cluster = 10;  // 100 trajectories
    spec.horizon = 200;             // x 200 frames = 20,000 points
    spec.seed = 99;
    const auto gen = generate(spec);
    const auto params = spec.recommended_params();

    const auto start = std::chrono::steady_clock::now();
    const auto frames = resample(gen.trajectories, params);
    const auto result = analyze_frames(frames, params);
    const auto stats =
        lifecycle_statistics(result.lifecycles, result.last_tick - result.first_tick);
    const double elapsed = seconds_since(start);

    std::size_t points = 0;
    for (const auto& frame : frames) points += frame.positions.size();
    const bool ok = elapsed < 10.0 && points == 20000 &&
                    stats.lifecycle_count == 10 && stats.alive_count == 10;
    report(7, "desk-scale throughput", ok,
           std::to_string(points) + " points in " + std::to_string(elapsed) + " s");
}

}  // namespace

int main() {
    criterion_clustering_oracle();
    criterion_similarity();
    criterion_planted_events();
    criterion_parallel_determinism();
    criterion_border_effect();
    criterion_event_balance();
    criterion_throughput();
    if (failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
