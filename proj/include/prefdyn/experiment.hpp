#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "prefdyn/analysis.hpp"

namespace prefdyn {

/// Configuration or manifest problems; reported with the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string message_fn_name(MessageFn fn) {
    switch (fn) {
        case MessageFn::Identity: return "identity";
        case MessageFn::Converse: return "converse";
        case MessageFn::Mirror: return "mirror";
    }
    return "identity";
}

inline MessageFn parse_message_fn(const std::string& name) {
    if (name == "identity") return MessageFn::Identity;
    if (name == "converse") return MessageFn::Converse;
    if (name == "mirror") return MessageFn::Mirror;
    throw ConfigError("message: expected identity|converse|mirror, got '" + name + "'");
}

inline std::string update_fn_name(UpdateFn fn) {
    switch (fn) {
        case UpdateFn::Prior: return "prior";
        case UpdateFn::Posterior: return "posterior";
        case UpdateFn::Meet: return "meet";
        case UpdateFn::Join: return "join";
    }
    return "join";
}

inline UpdateFn parse_update_fn(const std::string& name) {
    if (name == "prior") return UpdateFn::Prior;
    if (name == "posterior") return UpdateFn::Posterior;
    if (name == "meet") return UpdateFn::Meet;
    if (name == "join") return UpdateFn::Join;
    throw ConfigError("update: expected prior|posterior|meet|join, got '" + name + "'");
}

inline std::string metric_name(DisagreementVariant v) {
    return v == DisagreementVariant::Literal ? "literal" : "strict";
}

inline DisagreementVariant parse_metric(const std::string& name) {
    if (name == "literal") return DisagreementVariant::Literal;
    if (name == "strict") return DisagreementVariant::Strict;
    throw ConfigError("metric: expected literal|strict, got '" + name + "'");
}

/// Everything a reproducible experiment needs. Every stochastic choice
/// carries its own seed; the manifest written next to the outputs is a
/// complete config in the same key=value format and re-runs bit-for-bit.
struct ExperimentConfig {
    int alternatives = 5;
    int agents = 20;
    std::string graph_kind = "k_regular";
    int graph_k = 4;
    std::uint64_t graph_seed = 1;
    double init_p = 0.15;
    std::uint64_t init_seed = 2;
    int init_max_rejects = 1000;
    MessageFn message = MessageFn::Identity;
    UpdateFn update = UpdateFn::Join;
    bool r_random = true;  // per-agent threshold drawn uniformly from {1..k}
    int r_fixed = 1;       // used when r_random is false
    std::uint64_t r_seed = 3;
    int t_max = 15;
    int initial_profiles = 10;
    DisagreementVariant metric = DisagreementVariant::Literal;
    std::string output_dir = "out";

    void validate() const {
        if (alternatives < 1) throw ConfigError("alternatives: must be at least 1");
        if (agents < 1) throw ConfigError("agents: must be at least 1");
        if (graph_kind != "k_regular")
            throw ConfigError("graph.kind: only 'k_regular' is supported, got '" + graph_kind + "'");
        if (graph_k < 1) throw ConfigError("graph.k: must be at least 1");
        if (graph_k >= agents) throw ConfigError("graph.k: must be smaller than agents");
        if ((static_cast<long long>(agents) * graph_k) % 2 != 0)
            throw ConfigError("graph.k: agents*k must be even for a k-regular graph");
        if (!(init_p >= 0.0 && init_p <= 1.0)) throw ConfigError("init.p: must lie in [0, 1]");
        if (init_max_rejects < 1) throw ConfigError("init.max_rejects: must be at least 1");
        if (!r_random && (r_fixed < 1 || r_fixed > graph_k))
            throw ConfigError("r: fixed threshold must lie in [1, k]");
        if (t_max < 1) throw ConfigError("t_max: must be at least 1");
        if (initial_profiles < 1) throw ConfigError("initial_profiles: must be at least 1");
        if (output_dir.empty()) throw ConfigError("output: must not be empty");
    }
};

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

inline long long parse_integer(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long parsed = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
}

inline std::uint64_t parse_seed(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::uint64_t parsed = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
    }
}

inline double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace detail

/// key = value lines; '#' starts a comment; every key is optional and
/// defaults as in ExperimentConfig.
inline ExperimentConfig load_config(std::istream& in) {
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));

        if (key == "alternatives")
            config.alternatives = static_cast<int>(detail::parse_integer(key, value));
        else if (key == "agents")
            config.agents = static_cast<int>(detail::parse_integer(key, value));
        else if (key == "graph.kind")
            config.graph_kind = value;
        else if (key == "graph.k")
            config.graph_k = static_cast<int>(detail::parse_integer(key, value));
        else if (key == "graph.seed")
            config.graph_seed = detail::parse_seed(key, value);
        else if (key == "init.p")
            config.init_p = detail::parse_real(key, value);
        else if (key == "init.seed")
            config.init_seed = detail::parse_seed(key, value);
        else if (key == "init.max_rejects")
            config.init_max_rejects = static_cast<int>(detail::parse_integer(key, value));
        else if (key == "message")
            config.message = parse_message_fn(value);
        else if (key == "update")
            config.update = parse_update_fn(value);
        else if (key == "r") {
            if (value == "random") {
                config.r_random = true;
            } else {
                config.r_random = false;
                config.r_fixed = static_cast<int>(detail::parse_integer(key, value));
            }
        } else if (key == "r.seed")
            config.r_seed = detail::parse_seed(key, value);
        else if (key == "t_max")
            config.t_max = static_cast<int>(detail::parse_integer(key, value));
        else if (key == "initial_profiles")
            config.initial_profiles = static_cast<int>(detail::parse_integer(key, value));
        else if (key == "metric")
            config.metric = parse_metric(value);
        else if (key == "output")
            config.output_dir = value;
        else
            throw ConfigError("unknown key '" + key + "'");
    }
    config.validate();
    return config;
}

inline ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return load_config(in);
}

/// Canonical serialization; reloadable by load_config.
inline void write_manifest(std::ostream& out, const ExperimentConfig& config) {
    out << "alternatives = " << config.alternatives << '\n';
    out << "agents = " << config.agents << '\n';
    out << "graph.kind = " << config.graph_kind << '\n';
    out << "graph.k = " << config.graph_k << '\n';
    out << "graph.seed = " << config.graph_seed << '\n';
    out << "init.p = " << detail::format_double(config.init_p) << '\n';
    out << "init.seed = " << config.init_seed << '\n';
    out << "init.max_rejects = " << config.init_max_rejects << '\n';
    out << "message = " << message_fn_name(config.message) << '\n';
    out << "update = " << update_fn_name(config.update) << '\n';
    if (config.r_random)
        out << "r = random\n";
    else
        out << "r = " << config.r_fixed << '\n';
    out << "r.seed = " << config.r_seed << '\n';
    out << "t_max = " << config.t_max << '\n';
    out << "initial_profiles = " << config.initial_profiles << '\n';
    out << "metric = " << metric_name(config.metric) << '\n';
    out << "output = " << config.output_dir << '\n';
}

/// Independent rng stream for (master seed, stream index); parallel or
/// sequential execution of runs yields identical draws.
inline std::mt19937_64 seeded_rng(std::uint64_t master, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

struct RunRecord {
    int run_id = 0;
    Trajectory trajectory;
    EnergyTrace metrics;
};

struct ExperimentResult {
    ExperimentConfig config;
    Graph graph;
    std::vector<int> thresholds;  // resolved per-agent r
    bool connected = false;
    std::vector<RunRecord> runs;
};

inline ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const AlternativeSet alternatives(config.alternatives);

    auto graph_rng = seeded_rng(config.graph_seed, 0);
    Graph graph = random_k_regular(config.agents, config.graph_k, graph_rng);

    std::vector<int> thresholds(static_cast<std::size_t>(config.agents), config.r_fixed);
    if (config.r_random) {
        auto r_rng = seeded_rng(config.r_seed, 0);
        std::uniform_int_distribution<int> pick(1, config.graph_k);
        for (auto& r : thresholds) r = pick(r_rng);
    }

    std::vector<AgentSpec> agents;
    agents.reserve(thresholds.size());
    for (int r : thresholds) agents.push_back(AgentSpec{config.message, r, config.update});
    SystemSpec spec(graph, alternatives, std::move(agents));

    ExperimentResult result{config, graph, std::move(thresholds), graph.connected(), {}};
    for (int run_index = 0; run_index < config.initial_profiles; ++run_index) {
        auto rng = seeded_rng(config.init_seed, static_cast<std::uint64_t>(run_index) + 1);
        std::vector<PreferenceRelation> initial;
        initial.reserve(static_cast<std::size_t>(config.agents));
        for (int i = 0; i < config.agents; ++i)
            initial.push_back(random_preorder(alternatives, config.init_p, rng, config.init_max_rejects));

        RunRecord record;
        record.run_id = run_index;
        record.trajectory = run(spec, PreferenceProfile(std::move(initial)), config.t_max);
        record.metrics = trajectory_metrics(graph, record.trajectory, config.metric);
        result.runs.push_back(std::move(record));
    }
    return result;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path.string() + "'");
    return out;
}

inline std::string run_dir_name(int run_id) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "run_%03d", run_id);
    return buf;
}

inline std::string svg_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

/// Minimal self-contained line chart: one polyline per run, energy against
/// the round index.
inline void write_energy_chart(std::ostream& out, const ExperimentResult& result) {
    constexpr double width = 720, height = 440;
    constexpr double left = 64, right = 700, bottom = 392, top = 20;

    std::size_t max_rounds = 1;
    long long max_energy = 1;
    for (const auto& run : result.runs) {
        max_rounds = std::max(max_rounds, run.metrics.total.size());
        for (long long e : run.metrics.total) max_energy = std::max(max_energy, e);
    }
    const double x_span = static_cast<double>(max_rounds - 1 > 0 ? max_rounds - 1 : 1);
    const auto x_of = [&](std::size_t t) { return left + (right - left) * t / x_span; };
    const auto y_of = [&](long long e) {
        return bottom - (bottom - top) * static_cast<double>(e) / static_cast<double>(max_energy);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << ' ' << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << left << "\" y2=\"" << top
        << "\" stroke=\"black\"/>\n";

    const int x_ticks = static_cast<int>(std::min<std::size_t>(max_rounds, 8));
    for (int t = 0; t < x_ticks; ++t) {
        const std::size_t round = t * (max_rounds - 1) / (x_ticks > 1 ? x_ticks - 1 : 1);
        const double x = x_of(round);
        out << "<line x1=\"" << svg_coord(x) << "\" y1=\"" << bottom << "\" x2=\"" << svg_coord(x)
            << "\" y2=\"" << bottom + 4 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << svg_coord(x) << "\" y=\"" << bottom + 18
            << "\" text-anchor=\"middle\">" << round << "</text>\n";
    }
    for (int t = 0; t <= 4; ++t) {
        const long long e = max_energy * t / 4;
        const double y = y_of(e);
        out << "<line x1=\"" << left - 4 << "\" y1=\"" << svg_coord(y) << "\" x2=\"" << left
            << "\" y2=\"" << svg_coord(y) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << svg_coord(y + 4)
            << "\" text-anchor=\"end\">" << e << "</text>\n";
    }
    out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 14
        << "\" text-anchor=\"middle\">round t</text>\n";
    out << "<text x=\"16\" y=\"" << (top + bottom) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (top + bottom) / 2
        << ")\">Dirichlet energy</text>\n";

    const std::size_t run_count = result.runs.empty() ? 1 : result.runs.size();
    for (std::size_t r = 0; r < result.runs.size(); ++r) {
        const auto& totals = result.runs[r].metrics.total;
        out << "<polyline fill=\"none\" stroke=\"hsl(" << (r * 360 / run_count)
            << ",70%,45%)\" stroke-width=\"1.5\" points=\"";
        for (std::size_t t = 0; t < totals.size(); ++t) {
            if (t) out << ' ';
            out << svg_coord(x_of(t)) << ',' << svg_coord(y_of(totals[t]));
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace detail

/// Write energy.csv, edges.csv, energy.svg, manifest.txt, and per-run
/// graph/profile files under dir.
inline void emit_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    {
        auto out = detail::open_output(dir / "manifest.txt");
        write_manifest(out, result.config);
    }
    {
        auto out = detail::open_output(dir / "energy.csv");
        out << "run_id,t,dirichlet_energy\n";
        for (const auto& run : result.runs)
            for (std::size_t t = 0; t < run.metrics.total.size(); ++t)
                out << run.run_id << ',' << t << ',' << run.metrics.total[t] << '\n';
    }
    {
        auto out = detail::open_output(dir / "edges.csv");
        out << "run_id,t,i,j,kendall_tau\n";
        const auto& edges = result.graph.edges();
        for (const auto& run : result.runs)
            for (std::size_t t = 0; t < run.metrics.per_edge.size(); ++t)
                for (std::size_t e = 0; e < edges.size(); ++e)
                    out << run.run_id << ',' << t << ',' << edges[e].first << ','
                        << edges[e].second << ',' << run.metrics.per_edge[t][e] << '\n';
    }
    {
        auto out = detail::open_output(dir / "energy.svg");
        detail::write_energy_chart(out, result);
    }
    for (const auto& run : result.runs) {
        const fs::path run_dir = dir / "runs" / detail::run_dir_name(run.run_id);
        fs::create_directories(run_dir);
        {
            auto out = detail::open_output(run_dir / "graph.txt");
            write_graph(out, result.graph, result.config.graph_k, result.config.graph_seed);
        }
        {
            auto out = detail::open_output(run_dir / "initial_profile.txt");
            write_profile(out, run.trajectory.profiles.front());
        }
        {
            auto out = detail::open_output(run_dir / "final_profile.txt");
            write_profile(out, run.trajectory.profiles.back());
        }
    }
}

}  // namespace prefdyn
