#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <prefdyn/experiment.hpp>

using namespace prefdyn;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempDir {
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path = fs::temp_directory_path() /
               ("prefdyn_test_" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path path;
};

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.alternatives = 4;
    config.agents = 8;
    config.graph_k = 2;
    config.graph_seed = 11;
    config.init_p = 0.2;
    config.init_seed = 12;
    config.r_seed = 13;
    config.t_max = 15;
    config.initial_profiles = 3;
    return config;
}

}  // namespace

TEST_CASE("config parsing, defaults, and field errors") {
    std::istringstream empty("");
    const ExperimentConfig defaults = load_config(empty);
    REQUIRE(defaults.alternatives == 5);
    REQUIRE(defaults.agents == 20);
    REQUIRE(defaults.graph_k == 4);
    REQUIRE(defaults.t_max == 15);
    REQUIRE(defaults.initial_profiles == 10);
    REQUIRE(defaults.r_random);
    REQUIRE(defaults.metric == DisagreementVariant::Literal);

    std::istringstream full(
        "# experiment\n"
        "alternatives = 4\n"
        "agents = 10\n"
        "graph.kind = k_regular\n"
        "graph.k = 3   # trailing comment\n"
        "graph.seed = 99\n"
        "init.p = 0.25\n"
        "init.seed = 7\n"
        "init.max_rejects = 500\n"
        "message = converse\n"
        "update = meet\n"
        "r = 2\n"
        "r.seed = 5\n"
        "t_max = 9\n"
        "initial_profiles = 4\n"
        "metric = strict\n"
        "output = results\n");
    const ExperimentConfig parsed = load_config(full);
    REQUIRE(parsed.alternatives == 4);
    REQUIRE(parsed.agents == 10);
    REQUIRE(parsed.graph_k == 3);
    REQUIRE(parsed.graph_seed == 99);
    REQUIRE(parsed.init_p == 0.25);
    REQUIRE(parsed.init_max_rejects == 500);
    REQUIRE(parsed.message == MessageFn::Converse);
    REQUIRE(parsed.update == UpdateFn::Meet);
    REQUIRE_FALSE(parsed.r_random);
    REQUIRE(parsed.r_fixed == 2);
    REQUIRE(parsed.t_max == 9);
    REQUIRE(parsed.initial_profiles == 4);
    REQUIRE(parsed.metric == DisagreementVariant::Strict);
    REQUIRE(parsed.output_dir == "results");

    const auto expect_config_error = [](const std::string& body) {
        std::istringstream in(body);
        REQUIRE_THROWS_AS(load_config(in), ConfigError);
    };
    expect_config_error("t_max = 0\n");
    expect_config_error("unknown_key = 1\n");
    expect_config_error("agents = twenty\n");
    expect_config_error("graph.k = 25\n");           // k >= agents
    expect_config_error("agents = 5\ngraph.k = 3\n");  // odd n*k
    expect_config_error("init.p = 1.5\n");
    expect_config_error("message = shout\n");
    expect_config_error("update = forget\n");
    expect_config_error("metric = fuzzy\n");
    expect_config_error("r = 0\n");
    expect_config_error("no equals sign\n");
}

TEST_CASE("manifest round trips through the parser") {
    ExperimentConfig config = small_config();
    config.init_p = 0.3;
    config.message = MessageFn::Converse;
    config.update = UpdateFn::Posterior;
    config.r_random = false;
    config.r_fixed = 2;
    config.metric = DisagreementVariant::Strict;
    config.output_dir = "somewhere/else";

    std::ostringstream out;
    write_manifest(out, config);
    std::istringstream in(out.str());
    const ExperimentConfig reloaded = load_config(in);

    REQUIRE(reloaded.alternatives == config.alternatives);
    REQUIRE(reloaded.agents == config.agents);
    REQUIRE(reloaded.graph_k == config.graph_k);
    REQUIRE(reloaded.graph_seed == config.graph_seed);
    REQUIRE(reloaded.init_p == config.init_p);
    REQUIRE(reloaded.init_seed == config.init_seed);
    REQUIRE(reloaded.init_max_rejects == config.init_max_rejects);
    REQUIRE(reloaded.message == config.message);
    REQUIRE(reloaded.update == config.update);
    REQUIRE(reloaded.r_random == config.r_random);
    REQUIRE(reloaded.r_fixed == config.r_fixed);
    REQUIRE(reloaded.r_seed == config.r_seed);
    REQUIRE(reloaded.t_max == config.t_max);
    REQUIRE(reloaded.initial_profiles == config.initial_profiles);
    REQUIRE(reloaded.metric == config.metric);
    REQUIRE(reloaded.output_dir == config.output_dir);
}

TEST_CASE("experiment runs are reproducible and well-formed") {
    const ExperimentConfig config = small_config();
    const ExperimentResult result = run_experiment(config);

    REQUIRE(result.runs.size() == 3);
    REQUIRE(static_cast<int>(result.thresholds.size()) == config.agents);
    for (int r : result.thresholds) {
        REQUIRE(r >= 1);
        REQUIRE(r <= config.graph_k);
    }
    for (const auto& run : result.runs) {
        REQUIRE(run.trajectory.converged_at.has_value());
        REQUIRE(run.metrics.total.size() == run.trajectory.profiles.size());
    }

    const ExperimentResult again = run_experiment(config);
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        REQUIRE(result.runs[i].trajectory.profiles == again.runs[i].trajectory.profiles);
        REQUIRE(result.runs[i].metrics.total == again.runs[i].metrics.total);
    }
}

TEST_CASE("emitted outputs have the documented shapes") {
    TempDir dir;
    const ExperimentConfig config = small_config();
    const ExperimentResult result = run_experiment(config);
    emit_outputs(result, dir.path);

    for (const char* name : {"energy.csv", "edges.csv", "energy.svg", "manifest.txt"})
        REQUIRE(fs::exists(dir.path / name));
    for (const auto& run : result.runs) {
        const fs::path run_dir = dir.path / "runs" / detail::run_dir_name(run.run_id);
        for (const char* name : {"graph.txt", "initial_profile.txt", "final_profile.txt"})
            REQUIRE(fs::exists(run_dir / name));
    }

    // energy.csv: one header plus one row per stored round per run
    std::size_t expected_rows = 0;
    for (const auto& run : result.runs) expected_rows += run.trajectory.profiles.size();
    const std::string energy = slurp(dir.path / "energy.csv");
    const std::size_t energy_lines = std::count(energy.begin(), energy.end(), '\n');
    REQUIRE(energy_lines == expected_rows + 1);

    const std::string edges = slurp(dir.path / "edges.csv");
    const std::size_t edge_lines = std::count(edges.begin(), edges.end(), '\n');
    REQUIRE(edge_lines == expected_rows * result.graph.edges().size() + 1);

    // edge rows at t=0 and the final round reproduce the per-edge disagreement
    std::istringstream edge_stream(edges);
    std::string line;
    std::getline(edge_stream, line);
    REQUIRE(line == "run_id,t,i,j,kendall_tau");
    const auto& run0 = result.runs.front();
    const std::size_t final_round = run0.trajectory.profiles.size() - 1;
    std::size_t checked = 0;
    while (std::getline(edge_stream, line)) {
        int run_id = 0, t = 0, i = 0, j = 0, tau = 0;
        REQUIRE(std::sscanf(line.c_str(), "%d,%d,%d,%d,%d", &run_id, &t, &i, &j, &tau) == 5);
        if (run_id != 0) continue;
        if (t != 0 && t != static_cast<int>(final_round)) continue;
        const auto& profile = run0.trajectory.profiles[static_cast<std::size_t>(t)];
        REQUIRE(tau == kendall_tau(profile[i], profile[j], config.metric));
        ++checked;
    }
    REQUIRE(checked == 2 * result.graph.edges().size());

    // stored graph and profiles read back to the originals
    {
        std::ifstream in(dir.path / "runs" / "run_000" / "graph.txt");
        REQUIRE(read_graph(in).graph == result.graph);
    }
    {
        std::ifstream in(dir.path / "runs" / "run_000" / "initial_profile.txt");
        REQUIRE(read_profile(in) == run0.trajectory.profiles.front());
    }
    {
        std::ifstream in(dir.path / "runs" / "run_000" / "final_profile.txt");
        REQUIRE(read_profile(in) == run0.trajectory.profiles.back());
    }

    const std::string svg = slurp(dir.path / "energy.svg");
    REQUIRE(svg.find("<svg") != std::string::npos);
    REQUIRE(svg.find("polyline") != std::string::npos);
}

TEST_CASE("re-running an emitted manifest reproduces the tables byte for byte") {
    TempDir first_dir;
    TempDir second_dir;

    const ExperimentConfig config = small_config();
    emit_outputs(run_experiment(config), first_dir.path);

    const ExperimentConfig reloaded =
        load_config_file((first_dir.path / "manifest.txt").string());
    emit_outputs(run_experiment(reloaded), second_dir.path);

    REQUIRE(slurp(first_dir.path / "energy.csv") == slurp(second_dir.path / "energy.csv"));
    REQUIRE(slurp(first_dir.path / "edges.csv") == slurp(second_dir.path / "edges.csv"));
}

TEST_CASE("default experiment config converges with non-decreasing energy") {
    std::istringstream empty("");
    const ExperimentConfig config = load_config(empty);  // n=20, |A|=5, k=4, join update
    const ExperimentResult result = run_experiment(config);

    REQUIRE(result.runs.size() == 10);
    for (const auto& run : result.runs) {
        REQUIRE(run.trajectory.converged_at.has_value());
        REQUIRE(*run.trajectory.converged_at <= config.t_max);
        for (std::size_t t = 0; t + 1 < run.metrics.total.size(); ++t)
            REQUIRE(run.metrics.total[t] <= run.metrics.total[t + 1]);
    }
}

TEST_CASE("strict metric configuration flows through to the traces") {
    ExperimentConfig config = small_config();
    config.metric = DisagreementVariant::Strict;
    const ExperimentResult result = run_experiment(config);
    for (const auto& run : result.runs) {
        for (std::size_t t = 0; t < run.metrics.total.size(); ++t)
            REQUIRE(run.metrics.total[t] ==
                    dirichlet_energy(result.graph, run.trajectory.profiles[t],
                                     DisagreementVariant::Strict));
    }
}
