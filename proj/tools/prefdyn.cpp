// Command-line front end: seeded experiment runs, self-verification, and
// exhaustive stable-profile enumeration at desk scale.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure,
// 3 verification failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <prefdyn/prefdyn.hpp>

namespace {

constexpr std::size_t kLatticeCheckCap = 1000;  // verify_lattice is cubic in |S|

int do_run(const std::string& config_path, const std::string& output_override) {
    prefdyn::ExperimentConfig config = prefdyn::load_config_file(config_path);
    if (!output_override.empty()) config.output_dir = output_override;

    const prefdyn::ExperimentResult result = prefdyn::run_experiment(config);
    prefdyn::emit_outputs(result, config.output_dir);

    const auto& graph = result.graph;
    std::cout << "graph: n=" << graph.agent_count() << " k=" << config.graph_k
              << " seed=" << config.graph_seed << " edges=" << graph.edges().size()
              << " connected=" << (result.connected ? "yes" : "no") << '\n';

    std::map<int, int> convergence_histogram;
    int unconverged = 0;
    std::vector<long long> finals_literal, finals_strict;
    int quiet_edges_preserved_runs = 0;
    for (const auto& run : result.runs) {
        if (run.trajectory.converged_at.has_value())
            ++convergence_histogram[*run.trajectory.converged_at];
        else
            ++unconverged;
        const auto& final_profile = run.trajectory.profiles.back();
        finals_literal.push_back(
            dirichlet_energy(graph, final_profile, prefdyn::DisagreementVariant::Literal));
        finals_strict.push_back(
            dirichlet_energy(graph, final_profile, prefdyn::DisagreementVariant::Strict));

        // does an edge with no initial disagreement ever pick one up?
        bool preserved = true;
        const auto& first = run.metrics.per_edge.front();
        const auto& last = run.metrics.per_edge.back();
        for (std::size_t e = 0; e < first.size(); ++e)
            if (first[e] == 0 && last[e] != 0) preserved = false;
        quiet_edges_preserved_runs += preserved;
    }

    std::cout << "runs: " << result.runs.size() << "  converged: "
              << (result.runs.size() - unconverged) << '/' << result.runs.size() << '\n';
    std::cout << "convergence rounds:";
    for (const auto& [round, count] : convergence_histogram)
        std::cout << ' ' << round << "x" << count;
    if (unconverged > 0) std::cout << "  (plus " << unconverged << " unconverged)";
    std::cout << '\n';

    const auto describe = [](const std::vector<long long>& values) {
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        const double mean =
            static_cast<double>(std::accumulate(values.begin(), values.end(), 0LL)) /
            static_cast<double>(values.size());
        std::ostringstream out;
        out << "min=" << *lo << " mean=" << mean << " max=" << *hi;
        return out.str();
    };
    std::cout << "final Dirichlet energy (literal): " << describe(finals_literal) << '\n';
    std::cout << "final Dirichlet energy (strict): " << describe(finals_strict) << '\n';
    std::cout << "initially-quiet edges stayed quiet in " << quiet_edges_preserved_runs << '/'
              << result.runs.size() << " runs\n";
    std::cout << "outputs written to " << config.output_dir << '\n';
    return 0;
}

int do_verify(std::uint64_t seed) {
    const auto suites = prefdyn::verification::run_all(seed);
    bool all_passed = true;
    for (const auto& suite : suites) {
        std::cout << (suite.passed ? "PASS" : "FAIL") << "  " << suite.name << ": "
                  << suite.detail << '\n';
        all_passed = all_passed && suite.passed;
    }
    std::cout << (all_passed ? "verification passed" : "verification FAILED") << '\n';
    return all_passed ? 0 : 3;
}

prefdyn::Graph make_named_graph(const std::string& kind, int agents) {
    std::vector<std::pair<int, int>> edges;
    if (kind == "path") {
        for (int i = 0; i + 1 < agents; ++i) edges.emplace_back(i, i + 1);
    } else if (kind == "cycle") {
        if (agents < 3) throw prefdyn::ConfigError("graph: a cycle needs at least 3 agents");
        for (int i = 0; i + 1 < agents; ++i) edges.emplace_back(i, i + 1);
        edges.emplace_back(0, agents - 1);
    } else if (kind == "complete") {
        for (int i = 0; i < agents; ++i)
            for (int j = i + 1; j < agents; ++j) edges.emplace_back(i, j);
    } else if (kind == "edgeless") {
        // no edges
    } else {
        throw prefdyn::ConfigError("graph: expected path|cycle|complete|edgeless, got '" + kind +
                                   "'");
    }
    return prefdyn::Graph(agents, std::move(edges));
}

int do_enumerate(int alts, int agents, const std::string& graph_kind, const std::string& message,
                 const std::string& update, int threshold) {
    prefdyn::Graph graph = make_named_graph(graph_kind, agents);
    const prefdyn::AlternativeSet alternatives(alts);

    std::vector<prefdyn::AgentSpec> behaviors;
    for (int i = 0; i < agents; ++i) {
        if (graph.degree(i) >= 1 && threshold > graph.degree(i))
            throw prefdyn::ConfigError("r: agent " + std::to_string(i) + " has degree " +
                                       std::to_string(graph.degree(i)) +
                                       ", threshold must not exceed it");
        behaviors.push_back(prefdyn::AgentSpec{prefdyn::parse_message_fn(message), threshold,
                                               prefdyn::parse_update_fn(update)});
    }
    prefdyn::SystemSpec spec(std::move(graph), alternatives, std::move(behaviors));

    const std::size_t lattice_size = prefdyn::enumerate_preorders(alternatives).size();
    std::size_t scanned = 1;
    for (int i = 0; i < agents; ++i) scanned *= lattice_size;

    const prefdyn::FixedPointSet fixed = prefdyn::enumerate_fixed_points(spec);
    std::cout << "spec: |A|=" << alts << " agents=" << agents << " graph=" << graph_kind
              << " message=" << message << " update=" << update << " r=" << threshold << '\n';
    std::cout << "profiles scanned: " << scanned << '\n';
    std::cout << "stable profiles: " << fixed.points.size() << '\n';

    const auto print_profile = [](const char* label, const prefdyn::PreferenceProfile& profile) {
        std::cout << label << ":\n";
        prefdyn::write_profile(std::cout, profile);
    };
    if (fixed.minimum) print_profile("minimum", *fixed.minimum);
    if (fixed.maximum) print_profile("maximum", *fixed.maximum);
    if (!fixed.minimum || !fixed.maximum)
        std::cout << "extremes: " << (fixed.minimum ? "" : "no minimum ")
                  << (fixed.maximum ? "" : "no maximum") << '\n';

    if (fixed.points.size() <= kLatticeCheckCap) {
        const prefdyn::LatticeCheckReport report = prefdyn::verify_lattice(fixed.points);
        std::cout << "lattice check: " << (report.is_lattice() ? "PASS" : "FAIL") << " ("
                  << report.pairs_checked << " pairs, " << report.missing_lub
                  << " missing lubs, " << report.missing_glb << " missing glbs)\n";
        std::cout << "in-set join differs from ambient join on " << report.join_differs_from_ambient
                  << " pairs; meet differs on " << report.meet_differs_from_ambient << " pairs\n";
    } else {
        std::cout << "lattice check: skipped (" << fixed.points.size() << " points exceed cap of "
                  << kLatticeCheckCap << ")\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"preference dynamics on networks: lattice-based simulation and analysis"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "execute a configured experiment");
    std::string config_path;
    std::string output_override;
    run_cmd->add_option("--config", config_path, "key=value config file")->required();
    run_cmd->add_option("--output", output_override, "override the configured output directory");

    auto* verify_cmd = app.add_subcommand("verify", "run the invariant and oracle suites");
    std::uint64_t verify_seed = 7;
    verify_cmd->add_option("--seed", verify_seed, "master seed for the sampled checks");

    auto* enum_cmd =
        app.add_subcommand("enumerate", "exhaustively enumerate stable profiles of a small spec");
    int alts = 3, agents = 2, threshold = 1;
    std::string graph_kind = "path", message = "identity", update = "join";
    enum_cmd->add_option("--alts", alts, "number of alternatives (max 3)");
    enum_cmd->add_option("--agents", agents, "number of agents (max 3)");
    enum_cmd->add_option("--graph", graph_kind, "path|cycle|complete|edgeless");
    enum_cmd->add_option("--message", message, "identity|converse|mirror");
    enum_cmd->add_option("--update", update, "prior|posterior|meet|join");
    enum_cmd->add_option("--r", threshold, "median threshold for every agent");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return do_run(config_path, output_override);
        if (verify_cmd->parsed()) return do_verify(verify_seed);
        if (enum_cmd->parsed())
            return do_enumerate(alts, agents, graph_kind, message, update, threshold);
    } catch (const prefdyn::ConfigError& error) {
        std::cerr << "config error: " << error.what() << '\n';
        return 1;
    } catch (const std::length_error& error) {
        std::cerr << "config error: " << error.what() << '\n';
        return 1;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 2;
    }
    return 0;
}
