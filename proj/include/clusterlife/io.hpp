#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "clusterlife/core.hpp"
#include "clusterlife/lifecycle.hpp"
#include "clusterlife/scenario.hpp"

namespace clusterlife {

namespace detail {

/// Shortest representation that round-trips exactly.
inline std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

inline bool parse_double(std::string_view text, double& out) {
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

inline bool parse_tick(std::string_view text, Tick& out) {
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

inline std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return in;
}

}  // namespace detail

inline constexpr const char* kTrajectoryCsvHeader = "traj_id,tick,x,y";

/// Parses the trajectory CSV format (header `traj_id,tick,x,y`). Rows are
/// grouped by id and sorted by tick; duplicate (id, tick) rows and
/// malformed rows are rejected with their line number.
inline std::vector<Trajectory> load_trajectories(std::istream& in,
                                                 const std::string& origin = "<input>") {
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + what);
    };

    if (!std::getline(in, line)) fail("empty file");
    ++line_no;
    if (detail::strip_cr(line) != kTrajectoryCsvHeader)
        fail(std::string("expected header '") + kTrajectoryCsvHeader + "'");

    std::map<TrajectoryId, std::vector<TrajectoryPoint>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        const auto fields = detail::split_fields(line);
        if (fields.size() != 4) fail("malformed row: expected 4 comma-separated fields");
        if (fields[0].empty()) fail("malformed row: empty traj_id");
        TrajectoryPoint p;
        if (!detail::parse_tick(fields[1], p.tick) || p.tick < 0)
            fail("malformed row: tick must be a non-negative integer");
        if (!detail::parse_double(fields[2], p.x) || !std::isfinite(p.x))
            fail("malformed row: x is not a finite number");
        if (!detail::parse_double(fields[3], p.y) || !std::isfinite(p.y))
            fail("malformed row: y is not a finite number");
        rows[TrajectoryId(fields[0])].push_back(p);
    }
    if (rows.empty()) {
        line_no = 1;
        fail("no trajectory data");
    }

    std::vector<Trajectory> out;
    out.reserve(rows.size());
    for (auto& [id, points] : rows) {
        std::sort(points.begin(), points.end(),
                  [](const TrajectoryPoint& a, const TrajectoryPoint& b) { return a.tick < b.tick; });
        for (std::size_t i = 1; i < points.size(); ++i)
            if (points[i].tick == points[i - 1].tick)
                throw std::runtime_error(origin + ": duplicate reading for trajectory " + id +
                                         " at tick " + std::to_string(points[i].tick));
        out.push_back(Trajectory{id, std::move(points)});
    }
    return out;
}

inline std::vector<Trajectory> load_trajectories(const std::string& path) {
    auto in = detail::open_input(path);
    return load_trajectories(in, path);
}

inline void save_trajectories(const std::vector<Trajectory>& trajectories, std::ostream& out) {
    out << kTrajectoryCsvHeader << '\n';
    for (const Trajectory& t : trajectories)
        for (const TrajectoryPoint& p : t.points)
            out << t.id << ',' << p.tick << ',' << detail::format_double(p.x) << ','
                << detail::format_double(p.y) << '\n';
}

inline void save_trajectories(const std::vector<Trajectory>& trajectories,
                              const std::string& path) {
    auto out = detail::open_output(path);
    save_trajectories(trajectories, out);
}

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline ordered_json event_to_json(const LifecycleEvent& e) {
    ordered_json j;
    j["kind"] = event_kind_name(e.kind);
    j["tick"] = e.tick;
    j["subject"] = e.subject;
    j["trajectories"] = e.trajectory_participants;
    j["clusters"] = e.cluster_participants;
    j["subject_movement"] = movement_name(e.subject_movement);
    ordered_json moves = ordered_json::array();
    for (MovementLabel m : e.participant_movements) moves.push_back(movement_name(m));
    j["participant_movements"] = std::move(moves);
    return j;
}

inline LifecycleEvent event_from_json(const ordered_json& j) {
    LifecycleEvent e;
    const auto kind = event_kind_from_name(j.at("kind").get<std::string>());
    if (!kind) throw std::runtime_error("unknown event kind in results file");
    e.kind = *kind;
    e.tick = j.at("tick").get<Tick>();
    e.subject = j.at("subject").get<IdentityId>();
    e.trajectory_participants = j.at("trajectories").get<std::vector<TrajectoryId>>();
    e.cluster_participants = j.at("clusters").get<std::vector<IdentityId>>();
    e.subject_movement = j.at("subject_movement").get<std::string>() == "stop"
                             ? MovementLabel::Stop
                             : MovementLabel::Move;
    for (const auto& m : j.at("participant_movements"))
        e.participant_movements.push_back(m.get<std::string>() == "stop" ? MovementLabel::Stop
                                                                         : MovementLabel::Move);
    return e;
}

inline ordered_json statistics_to_json(const LifecycleStatistics& s) {
    ordered_json j;
    j["lifecycle_count"] = s.lifecycle_count;
    j["completed_count"] = s.completed_count;
    j["alive_count"] = s.alive_count;
    j["lifetime"] = {{"min", s.lifetime_min}, {"mean", s.lifetime_mean}, {"max", s.lifetime_max}};
    j["censored_lifetime"] = {
        {"min", s.censored_min}, {"mean", s.censored_mean}, {"max", s.censored_max}};
    j["mean_cluster_size"] = s.mean_cluster_size;
    ordered_json events;
    for (EventKind k : {EventKind::Start, EventKind::Enter, EventKind::Leave, EventKind::Merge,
                        EventKind::Split, EventKind::End})
        events[event_kind_name(k)] = s.event_counts[static_cast<std::size_t>(k)];
    j["events"] = std::move(events);
    j["formation_rate"] = s.formation_rate;
    j["disappearance_rate"] = s.disappearance_rate;
    j["mean_member_persistence"] = s.mean_member_persistence;
    j["horizon"] = s.horizon;
    return j;
}

}  // namespace detail

/// Serializes an analysis to the line-delimited results format: one
/// lifecycle per line (identities ordered by birth tick then id, events in
/// canonical order) followed by one summary record. Identical analyses
/// produce byte-identical text.
inline std::string serialize_results(const AnalysisResult& result,
                                     const LifecycleStatistics& statistics) {
    std::string out;
    for (const ClusterLifecycle& lc : result.lifecycles) {
        detail::ordered_json j;
        j["type"] = "lifecycle";
        j["id"] = lc.id;
        j["birth"] = lc.birth;
        if (lc.death)
            j["death"] = *lc.death;
        else
            j["death"] = nullptr;
        if (lc.cell) j["cell"] = {lc.cell->first, lc.cell->second};
        detail::ordered_json events = detail::ordered_json::array();
        for (const LifecycleEvent& e : lc.events) events.push_back(detail::event_to_json(e));
        j["events"] = std::move(events);
        detail::ordered_json members = detail::ordered_json::array();
        for (const auto& [tick, ids] : lc.members_by_tick)
            members.push_back(detail::ordered_json::array({tick, ids}));
        j["members"] = std::move(members);
        out += j.dump();
        out += '\n';
    }
    detail::ordered_json summary;
    summary["type"] = "summary";
    summary["first_tick"] = result.first_tick;
    summary["last_tick"] = result.last_tick;
    summary["statistics"] = detail::statistics_to_json(statistics);
    detail::ordered_json border = detail::ordered_json::array();
    for (const auto& [tick, count] : result.border_counts)
        border.push_back(detail::ordered_json::array({tick, count}));
    summary["border_report"] = std::move(border);
    out += summary.dump();
    out += '\n';
    return out;
}

inline void export_results(const AnalysisResult& result, const LifecycleStatistics& statistics,
                           const std::string& path) {
    auto out = detail::open_output(path);
    out << serialize_results(result, statistics);
    if (!out) throw std::runtime_error("failed writing " + path);
}

/// A results file read back: lifecycles plus the flattened canonical event
/// stream and the summary record's contents.
struct LoadedResults {
    std::vector<ClusterLifecycle> lifecycles;
    std::vector<LifecycleEvent> events;
    std::map<Tick, std::size_t> border_counts;
    Tick first_tick = 0;
    Tick last_tick = 0;
    Tick horizon = 0;
};

inline LoadedResults load_results(std::istream& in, const std::string& origin = "<results>") {
    LoadedResults out;
    std::string line;
    std::size_t line_no = 0;
    bool saw_summary = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        detail::ordered_json j;
        try {
            j = detail::ordered_json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
        const std::string type = j.at("type").get<std::string>();
        if (type == "lifecycle") {
            ClusterLifecycle lc;
            lc.id = j.at("id").get<IdentityId>();
            lc.birth = j.at("birth").get<Tick>();
            if (!j.at("death").is_null()) lc.death = j.at("death").get<Tick>();
            if (j.contains("cell"))
                lc.cell = std::make_pair(j["cell"][0].get<std::int64_t>(),
                                         j["cell"][1].get<std::int64_t>());
            for (const auto& e : j.at("events"))
                lc.events.push_back(detail::event_from_json(e));
            for (const auto& m : j.at("members"))
                lc.members_by_tick[m[0].get<Tick>()] = m[1].get<std::vector<TrajectoryId>>();
            out.lifecycles.push_back(std::move(lc));
        } else if (type == "summary") {
            saw_summary = true;
            out.first_tick = j.at("first_tick").get<Tick>();
            out.last_tick = j.at("last_tick").get<Tick>();
            out.horizon = j.at("statistics").at("horizon").get<Tick>();
            for (const auto& b : j.at("border_report"))
                out.border_counts[b[0].get<Tick>()] = b[1].get<std::size_t>();
        } else {
            throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                     ": unknown record type " + type);
        }
    }
    if (!saw_summary)
        throw std::runtime_error(origin + ": missing summary record");
    for (const ClusterLifecycle& lc : out.lifecycles)
        out.events.insert(out.events.end(), lc.events.begin(), lc.events.end());
    std::sort(out.events.begin(), out.events.end(), event_canonical_less);
    return out;
}

inline LoadedResults load_results(const std::string& path) {
    auto in = detail::open_input(path);
    return load_results(in, path);
}

/// Truth files reuse the event schema: one truth_event record per expected
/// event plus a truth_summary record.
inline void save_truth(const GroundTruth& truth, std::ostream& out) {
    for (const TruthEvent& e : truth.events) {
        detail::ordered_json j;
        j["type"] = "truth_event";
        j["kind"] = event_kind_name(e.kind);
        j["tick"] = e.tick;
        j["cardinality"] = e.cardinality;
        out << j.dump() << '\n';
    }
    detail::ordered_json summary;
    summary["type"] = "truth_summary";
    summary["identity_count"] = truth.identity_count;
    out << summary.dump() << '\n';
}

inline void save_truth(const GroundTruth& truth, const std::string& path) {
    auto out = detail::open_output(path);
    save_truth(truth, out);
}

inline GroundTruth load_truth(std::istream& in, const std::string& origin = "<truth>") {
    GroundTruth truth;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        detail::ordered_json j;
        try {
            j = detail::ordered_json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
        const std::string type = j.at("type").get<std::string>();
        if (type == "truth_event") {
            const auto kind = event_kind_from_name(j.at("kind").get<std::string>());
            if (!kind)
                throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                         ": unknown event kind");
            truth.events.push_back(
                TruthEvent{*kind, j.at("tick").get<Tick>(), j.at("cardinality").get<std::size_t>()});
        } else if (type == "truth_summary") {
            truth.identity_count = j.at("identity_count").get<std::size_t>();
        } else {
            throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                     ": unknown record type " + type);
        }
    }
    return truth;
}

inline GroundTruth load_truth(const std::string& path) {
    auto in = detail::open_input(path);
    return load_truth(in, path);
}

/// Per-tick series ready for external plotting: active cluster count, size
/// distribution summary, cumulative Starts and Ends.
inline void emit_plot_data(const std::vector<ClusterLifecycle>& lifecycles, std::ostream& out) {
    out << "tick,active_clusters,size_min,size_mean,size_max,cum_starts,cum_ends\n";

    std::set<Tick> ticks;
    std::map<Tick, std::size_t> starts_at, ends_at;
    for (const ClusterLifecycle& lc : lifecycles) {
        for (const auto& [tick, members] : lc.members_by_tick) ticks.insert(tick);
        for (const LifecycleEvent& e : lc.events) {
            ticks.insert(e.tick);
            if (e.kind == EventKind::Start) ++starts_at[e.tick];
            if (e.kind == EventKind::End) ++ends_at[e.tick];
        }
    }

    std::size_t cum_starts = 0, cum_ends = 0;
    for (Tick tick : ticks) {
        std::size_t active = 0, size_min = 0, size_max = 0, size_sum = 0;
        for (const ClusterLifecycle& lc : lifecycles) {
            auto it = lc.members_by_tick.find(tick);
            if (it == lc.members_by_tick.end()) continue;
            const std::size_t size = it->second.size();
            if (active == 0) {
                size_min = size_max = size;
            } else {
                size_min = std::min(size_min, size);
                size_max = std::max(size_max, size);
            }
            ++active;
            size_sum += size;
        }
        cum_starts += starts_at.count(tick) ? starts_at[tick] : 0;
        cum_ends += ends_at.count(tick) ? ends_at[tick] : 0;
        const double size_mean =
            active == 0 ? 0.0 : static_cast<double>(size_sum) / static_cast<double>(active);
        out << tick << ',' << active << ',' << size_min << ',' << detail::format_double(size_mean)
            << ',' << size_max << ',' << cum_starts << ',' << cum_ends << '\n';
    }
}

inline void emit_plot_data(const std::vector<ClusterLifecycle>& lifecycles,
                           const std::string& path) {
    auto out = detail::open_output(path);
    emit_plot_data(lifecycles, out);
}

/// A full run configuration: paths, worker count, analysis parameters.
struct RunConfig {
    std::string input;
    std::string output;
    std::string plot_output;
    int workers = 1;
    AnalysisParams params;
};

/// Applies one key=value setting; throws std::invalid_argument for unknown
/// keys or unparsable values.
inline void apply_config_entry(RunConfig& config, const std::string& key,
                               const std::string& value) {
    auto as_double = [&](double& out) {
        if (!detail::parse_double(value, out))
            throw std::invalid_argument("config: invalid number for " + key + ": " + value);
    };
    auto as_tick = [&](Tick& out) {
        if (!detail::parse_tick(value, out))
            throw std::invalid_argument("config: invalid integer for " + key + ": " + value);
    };
    auto as_int = [&](int& out) {
        Tick t = 0;
        as_tick(t);
        out = static_cast<int>(t);
    };

    if (key == "input") config.input = value;
    else if (key == "output") config.output = value;
    else if (key == "plot_output") config.plot_output = value;
    else if (key == "workers") as_int(config.workers);
    else if (key == "r_e") as_double(config.params.r_e);
    else if (key == "r_n") as_double(config.params.r_n);
    else if (key == "r_g_error") as_double(config.params.r_g_error);
    else if (key == "eps") as_double(config.params.eps);
    else if (key == "min_pts") as_int(config.params.min_pts);
    else if (key == "min_cluster") as_int(config.params.min_cluster);
    else if (key == "min_shared") as_double(config.params.min_shared);
    else if (key == "max_dist_centroid") as_double(config.params.max_dist_centroid);
    else if (key == "interval") as_tick(config.params.interval);
    else if (key == "staleness_window") as_tick(config.params.staleness_window);
    else if (key == "partial_shared") as_double(config.params.partial_shared);
    else if (key == "grid_cell") as_double(config.params.grid_cell);
    else if (key == "halo") as_double(config.params.halo);
    else throw std::invalid_argument("config: unknown key " + key);
}

/// Flat key=value config file; '#' starts a comment, blank lines skipped.
inline void load_config(std::istream& in, RunConfig& config,
                        const std::string& origin = "<config>") {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::size_t begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        std::size_t end = line.find_last_not_of(" \t");
        line = line.substr(begin, end - begin + 1);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": expected key=value");
        auto trim = [](std::string s) {
            const std::size_t b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            const std::size_t e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        try {
            apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

inline void load_config(const std::string& path, RunConfig& config) {
    auto in = detail::open_input(path);
    load_config(in, config, path);
}

/// Writes a params set as a config file (used by `generate` so analyses of
/// generated data start from the matching geometry).
inline void save_config(const RunConfig& config, std::ostream& out) {
    const AnalysisParams& p = config.params;
    out << "eps=" << detail::format_double(p.eps) << '\n'
        << "r_e=" << detail::format_double(p.r_e) << '\n'
        << "r_n=" << detail::format_double(p.r_n) << '\n'
        << "r_g_error=" << detail::format_double(p.r_g_error) << '\n'
        << "max_dist_centroid=" << detail::format_double(p.max_dist_centroid) << '\n'
        << "min_pts=" << p.min_pts << '\n'
        << "min_cluster=" << p.min_cluster << '\n'
        << "min_shared=" << detail::format_double(p.min_shared) << '\n'
        << "partial_shared=" << detail::format_double(p.partial_shared) << '\n'
        << "interval=" << p.interval << '\n'
        << "staleness_window=" << p.normalized().staleness_window << '\n'
        << "grid_cell=" << detail::format_double(p.grid_cell) << '\n'
        << "halo=" << detail::format_double(p.normalized().halo) << '\n';
}

inline void save_config(const RunConfig& config, const std::string& path) {
    auto out = detail::open_output(path);
    save_config(config, out);
}

}  // namespace clusterlife
