// Command-line front end: analyze / generate / score / stats / plotdata.
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "clusterlife/clusterlife.hpp"

using namespace clusterlife;

namespace {

struct ParamFlags {
    CLI::Option* eps = nullptr;
    CLI::Option* r_e = nullptr;
    CLI::Option* r_n = nullptr;
    CLI::Option* r_g_error = nullptr;
    CLI::Option* max_dist_centroid = nullptr;
    CLI::Option* min_pts = nullptr;
    CLI::Option* min_cluster = nullptr;
    CLI::Option* min_shared = nullptr;
    CLI::Option* partial_shared = nullptr;
    CLI::Option* interval = nullptr;
    CLI::Option* staleness_window = nullptr;
    CLI::Option* grid_cell = nullptr;
    CLI::Option* halo = nullptr;
    AnalysisParams values;
};

ParamFlags add_param_flags(CLI::App& cmd) {
    ParamFlags f;
    f.eps = cmd.add_option("--eps", f.values.eps, "Clustering distance threshold (required)");
    f.r_e = cmd.add_option("--r-e", f.values.r_e, "Error radius for stop detection (required)");
    f.r_n = cmd.add_option("--r-n", f.values.r_n, "Neighborhood radius (required)");
    f.r_g_error =
        cmd.add_option("--r-g-error", f.values.r_g_error, "Group stop radius (required)");
    f.max_dist_centroid = cmd.add_option("--max-dist-centroid", f.values.max_dist_centroid,
                                         "Centroid comparison cutoff (required)");
    f.min_pts = cmd.add_option("--min-pts", f.values.min_pts, "DBSCAN density threshold");
    f.min_cluster =
        cmd.add_option("--min-cluster", f.values.min_cluster, "Minimum valid cluster size");
    f.min_shared = cmd.add_option("--min-shared", f.values.min_shared,
                                  "Strict shared fraction for identity threading");
    f.partial_shared = cmd.add_option("--partial-shared", f.values.partial_shared,
                                      "Fraction marking merge/split contributors");
    f.interval = cmd.add_option("--interval", f.values.interval, "Universal timestamp spacing");
    f.staleness_window = cmd.add_option("--staleness-window", f.values.staleness_window,
                                        "Max age of a reading (default: interval)");
    f.grid_cell =
        cmd.add_option("--grid-cell", f.values.grid_cell, "Grid cell edge; 0 disables the grid");
    f.halo = cmd.add_option("--halo", f.values.halo, "Ghost margin (default: 2*eps)");
    return f;
}

void overlay(const ParamFlags& flags, AnalysisParams& params) {
    if (flags.eps->count()) params.eps = flags.values.eps;
    if (flags.r_e->count()) params.r_e = flags.values.r_e;
    if (flags.r_n->count()) params.r_n = flags.values.r_n;
    if (flags.r_g_error->count()) params.r_g_error = flags.values.r_g_error;
    if (flags.max_dist_centroid->count())
        params.max_dist_centroid = flags.values.max_dist_centroid;
    if (flags.min_pts->count()) params.min_pts = flags.values.min_pts;
    if (flags.min_cluster->count()) params.min_cluster = flags.values.min_cluster;
    if (flags.min_shared->count()) params.min_shared = flags.values.min_shared;
    if (flags.partial_shared->count()) params.partial_shared = flags.values.partial_shared;
    if (flags.interval->count()) params.interval = flags.values.interval;
    if (flags.staleness_window->count())
        params.staleness_window = flags.values.staleness_window;
    if (flags.grid_cell->count()) params.grid_cell = flags.values.grid_cell;
    if (flags.halo->count()) params.halo = flags.values.halo;
}

void print_statistics(const LifecycleStatistics& s) {
    std::printf("lifecycles:            %zu (%zu completed, %zu alive at horizon)\n",
                s.lifecycle_count, s.completed_count, s.alive_count);
    if (s.completed_count > 0)
        std::printf("lifetime (ticks):      min %.6g  mean %.6g  max %.6g\n", s.lifetime_min,
                    s.lifetime_mean, s.lifetime_max);
    if (s.alive_count > 0)
        std::printf("censored lifetime:     min %.6g  mean %.6g  max %.6g\n", s.censored_min,
                    s.censored_mean, s.censored_max);
    std::printf("mean cluster size:     %.6g\n", s.mean_cluster_size);
    std::printf("events:               ");
    for (EventKind k : {EventKind::Start, EventKind::Enter, EventKind::Leave, EventKind::Merge,
                        EventKind::Split, EventKind::End})
        std::printf(" %s=%zu", event_kind_name(k), s.event_counts[static_cast<std::size_t>(k)]);
    std::printf("\n");
    std::printf("formation rate:        %.6g per tick\n", s.formation_rate);
    std::printf("disappearance rate:    %.6g per tick\n", s.disappearance_rate);
    std::printf("member persistence:    %.6g\n", s.mean_member_persistence);
    std::printf("horizon:               %lld ticks\n", static_cast<long long>(s.horizon));
}

int run_analyze(const std::string& config_path, const ParamFlags& flags, RunConfig config,
                const std::string& input_flag, const std::string& output_flag,
                const std::string& plot_flag, int workers_flag, bool workers_given) {
    if (!config_path.empty()) load_config(config_path, config);
    overlay(flags, config.params);
    if (!input_flag.empty()) config.input = input_flag;
    if (!output_flag.empty()) config.output = output_flag;
    if (!plot_flag.empty()) config.plot_output = plot_flag;
    if (workers_given) config.workers = workers_flag;

    if (config.input.empty()) throw std::invalid_argument("analyze: no input file (--input)");
    if (config.output.empty()) throw std::invalid_argument("analyze: no output file (--output)");
    if (config.workers < 1) throw std::invalid_argument("analyze: workers must be >= 1");
    config.params.validate();

    const auto trajectories = load_trajectories(config.input);
    const auto frames = resample(trajectories, config.params);
    const auto result = run_partitioned(frames, config.params, config.workers);
    const auto stats =
        lifecycle_statistics(result.lifecycles, result.last_tick - result.first_tick);
    export_results(result, stats, config.output);
    if (!config.plot_output.empty()) emit_plot_data(result.lifecycles, config.plot_output);

    std::printf("%zu trajectories, %zu frames [%lld..%lld]\n", trajectories.size(), frames.size(),
                static_cast<long long>(result.first_tick),
                static_cast<long long>(result.last_tick));
    print_statistics(stats);
    std::size_t border_total = 0;
    for (const auto& [tick, count] : result.border_counts) border_total += count;
    if (config.params.grid_cell > 0)
        std::printf("border-affected cluster-ticks: %zu\n", border_total);
    std::printf("results written to %s\n", config.output.c_str());
    return 0;
}

int run_generate(const std::string& kind_name, int clusters, int members, Tick horizon, int noise,
                 double scale, std::uint64_t seed, const std::string& data_path,
                 const std::string& truth_path, const std::string& params_path) {
    const auto kind = scenario_kind_from_name(kind_name);
    if (!kind)
        throw std::invalid_argument("generate: unknown kind '" + kind_name +
                                    "' (stable|split|merge|churn|crossing|mixed)");
    ScenarioSpec spec;
    spec.kind = *kind;
    spec.cluster_count = clusters;
    spec.members_per_cluster = members;
    spec.horizon = horizon;
    spec.noise_count = noise;
    spec.scale = scale;
    spec.seed = seed;

    const auto scenario = generate(spec);
    save_trajectories(scenario.trajectories, data_path);
    save_truth(scenario.truth, truth_path);
    if (!params_path.empty()) {
        RunConfig config;
        config.params = spec.recommended_params().normalized();
        save_config(config, params_path);
    }
    std::printf("%s scenario: %zu trajectories over %lld ticks, %zu expected events, "
                "%zu identities\n",
                scenario_kind_name(spec.kind), scenario.trajectories.size(),
                static_cast<long long>(spec.horizon), scenario.truth.events.size(),
                scenario.truth.identity_count);
    std::printf("data -> %s\ntruth -> %s\n", data_path.c_str(), truth_path.c_str());
    if (!params_path.empty()) std::printf("params -> %s\n", params_path.c_str());
    return 0;
}

int run_score(const std::string& detected_path, const std::string& truth_path, Tick tolerance) {
    const auto detected = load_results(detected_path);
    const auto truth = load_truth(truth_path);
    const auto report = score(detected.events, truth, tolerance);

    std::printf("%-8s %9s %9s %9s %10s %8s\n", "kind", "expected", "detected", "matched",
                "precision", "recall");
    for (const auto& [kind, ks] : report.per_kind) {
        if (ks.expected == 0 && ks.detected == 0) continue;
        std::printf("%-8s %9zu %9zu %9zu %10.4f %8.4f\n", event_kind_name(kind), ks.expected,
                    ks.detected, ks.matched, ks.precision(), ks.recall());
    }
    std::printf("%-8s %9zu %9zu %9zu %10.4f %8.4f\n", "overall", report.overall.expected,
                report.overall.detected, report.overall.matched, report.overall.precision(),
                report.overall.recall());
    return 0;
}

int run_stats(const std::string& input_path, Tick horizon, bool horizon_given) {
    const auto loaded = load_results(input_path);
    const Tick span = horizon_given ? horizon : loaded.last_tick - loaded.first_tick;
    print_statistics(lifecycle_statistics(loaded.lifecycles, span));
    return 0;
}

int run_plotdata(const std::string& input_path, const std::string& output_path) {
    const auto loaded = load_results(input_path);
    emit_plot_data(loaded.lifecycles, output_path);
    std::printf("plot data written to %s\n", output_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trajectory cluster lifecycle analysis"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Run the full pipeline on a trajectory CSV");
    std::string a_config, a_input, a_output, a_plot;
    int a_workers = 1;
    analyze->add_option("--config", a_config, "Flat key=value config file");
    analyze->add_option("-i,--input", a_input, "Trajectory CSV");
    analyze->add_option("-o,--output", a_output, "Results file (line-delimited records)");
    analyze->add_option("--plot-data", a_plot, "Also write per-tick plot series here");
    auto* workers_opt = analyze->add_option("--workers", a_workers, "Worker threads for the grid");
    const ParamFlags analyze_flags = add_param_flags(*analyze);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a synthetic scenario with ground truth");
    std::string g_kind = "stable", g_data, g_truth, g_params;
    int g_clusters = 2, g_members = 6, g_noise = 0;
    Tick g_horizon = 30;
    double g_scale = 100.0;
    std::uint64_t g_seed = 0;
    gen->add_option("--kind", g_kind, "stable|split|merge|churn|crossing|mixed");
    gen->add_option("--clusters", g_clusters, "Planted cluster count");
    gen->add_option("--members", g_members, "Members per cluster");
    gen->add_option("--horizon", g_horizon, "Frames to generate");
    gen->add_option("--noise", g_noise, "Unclustered trajectories");
    gen->add_option("--scale", g_scale, "Spacing between planted sites");
    gen->add_option("--seed", g_seed, "Generator seed");
    gen->add_option("--data", g_data, "Output trajectory CSV")->required();
    gen->add_option("--truth", g_truth, "Output truth file")->required();
    gen->add_option("--params-out", g_params, "Write the matching analysis config here");

    // score
    auto* sc = app.add_subcommand("score", "Score detected events against planted truth");
    std::string s_detected, s_truth;
    Tick s_tolerance = 1;
    sc->add_option("--detected", s_detected, "Results file from analyze")->required();
    sc->add_option("--truth", s_truth, "Truth file from generate")->required();
    sc->add_option("--tolerance", s_tolerance, "Tick tolerance (default 1)");

    // stats
    auto* st = app.add_subcommand("stats", "Print lifecycle statistics for a results file");
    std::string st_input;
    Tick st_horizon = 0;
    st->add_option("-i,--input", st_input, "Results file")->required();
    auto* st_horizon_opt =
        st->add_option("--horizon", st_horizon, "Horizon override in ticks");

    // plotdata
    auto* pd = app.add_subcommand("plotdata", "Emit per-tick plot series from a results file");
    std::string pd_input, pd_output;
    pd->add_option("-i,--input", pd_input, "Results file")->required();
    pd->add_option("-o,--output", pd_output, "Plot CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed())
            return run_analyze(a_config, analyze_flags, RunConfig{}, a_input, a_output, a_plot,
                               a_workers, workers_opt->count() > 0);
        if (gen->parsed())
            return run_generate(g_kind, g_clusters, g_members, g_horizon, g_noise, g_scale,
                                g_seed, g_data, g_truth, g_params);
        if (sc->parsed()) return run_score(s_detected, s_truth, s_tolerance);
        if (st->parsed()) return run_stats(st_input, st_horizon, st_horizon_opt->count() > 0);
        if (pd->parsed()) return run_plotdata(pd_input, pd_output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
