// Acceptance suite: one pass/fail line per criterion, exit status equals the
// number of failed criteria. The first argument, when present, is the path
// to the prefdyn CLI binary (needed for the manifest reproducibility check).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <prefdyn/prefdyn.hpp>

namespace fs = std::filesystem;
using namespace prefdyn;

namespace {

struct CriterionResult {
    int id = 0;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "<unreadable:" + path.string() + ">";
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// ---------------------------------------------------------------------------

CriterionResult criterion_lattice_laws() {
    Stopwatch timer;
    const SuiteResult suite = verification::lattice_laws(5, 1000, 9001);
    const double elapsed = timer.seconds();
    CriterionResult result{1, suite.passed && elapsed < 5.0, suite.detail, elapsed};
    if (elapsed >= 5.0) result.detail += " [exceeded the 5 s budget]";
    return result;
}

CriterionResult criterion_desk_completeness() {
    Stopwatch timer;
    const SuiteResult suite = verification::desk_scale_completeness();
    return {2, suite.passed, suite.detail, timer.seconds()};
}

CriterionResult criterion_median_oracle() {
    Stopwatch timer;
    const SuiteResult suite = verification::median_matches_bruteforce(500, 9002);
    return {3, suite.passed, suite.detail, timer.seconds()};
}

CriterionResult criterion_aggregation_axioms() {
    Stopwatch timer;
    const SuiteResult suite = verification::aggregation_axioms(100, 50, 9003);
    return {4, suite.passed, suite.detail, timer.seconds()};
}

CriterionResult criterion_tarski() {
    Stopwatch timer;
    CriterionResult result{5, false, "", 0.0};

    // |A|=3, two agents on a single edge, identity messages, median + join.
    // Each agent has exactly one neighbor, so the only admissible coalition
    // threshold is r=1 (the median requires 1 <= r <= #messages = degree).
    const AlternativeSet alts(3);
    const Graph edge(2, {{0, 1}});
    const std::vector<AgentSpec> agents(2, AgentSpec{MessageFn::Identity, 1, UpdateFn::Join});
    const SystemSpec spec(edge, alts, agents);

    const std::size_t lattice_size = enumerate_preorders(alts).size();
    const std::size_t scanned = lattice_size * lattice_size;

    const FixedPointSet fixed = enumerate_fixed_points(spec);
    const LatticeCheckReport report = verify_lattice(fixed.points);

    const bool nonempty = !fixed.points.empty();
    const bool extremes = fixed.minimum.has_value() && fixed.maximum.has_value();
    const bool diagonal = fixed.points.size() == 29;  // join-fixed pairs must agree
    const double elapsed = timer.seconds();

    result.passed = scanned == 841 && nonempty && extremes && diagonal && report.is_lattice() &&
                    elapsed < 60.0;
    std::ostringstream detail;
    detail << scanned << " profiles scanned, " << fixed.points.size()
           << " stable, min/max " << (extremes ? "unique" : "MISSING") << ", "
           << report.pairs_checked << " pairs with lub+glb in the set ("
           << report.missing_lub << " lub / " << report.missing_glb
           << " glb missing); r=1 is the only threshold admissible at degree 1";
    result.detail = detail.str();
    result.seconds = elapsed;
    return result;
}

struct ConvergenceData {
    std::vector<Graph> graphs;
    std::vector<Trajectory> join_trajectories;
};

CriterionResult criterion_convergence(ConvergenceData& shared) {
    Stopwatch timer;
    const AlternativeSet alts(5);
    // budget 16 so that converged_at == 15 is still witnessed by one more step
    const int agents = 20, k = 4, round_limit = 15, budget = 16, runs = 100;

    int within_limit = 0, limit_matches = 0, fixed_points = 0, max_round = -1;
    int meet_within_limit = 0, meet_limit_matches = 0, meet_fixed_points = 0;

    for (int index = 0; index < runs; ++index) {
        auto graph_rng = seeded_rng(7200, static_cast<std::uint64_t>(index));
        Graph graph = random_k_regular(agents, k, graph_rng);

        auto r_rng = seeded_rng(7300, static_cast<std::uint64_t>(index));
        std::vector<AgentSpec> join_agents, meet_agents;
        for (int i = 0; i < agents; ++i) {
            const int r = std::uniform_int_distribution<int>(1, k)(r_rng);
            join_agents.push_back(AgentSpec{MessageFn::Identity, r, UpdateFn::Join});
            meet_agents.push_back(AgentSpec{MessageFn::Identity, r, UpdateFn::Meet});
        }

        auto init_rng = seeded_rng(7400, static_cast<std::uint64_t>(index));
        std::vector<PreferenceRelation> relations;
        for (int i = 0; i < agents; ++i)
            relations.push_back(random_preorder(alts, 0.15, init_rng, 10000));
        const PreferenceProfile initial(relations);

        const SystemSpec join_spec(graph, alts, join_agents);
        const Trajectory join_run = run(join_spec, initial, budget);
        if (join_run.converged_at.has_value() && *join_run.converged_at <= round_limit) {
            ++within_limit;
            max_round = std::max(max_round, *join_run.converged_at);
            PreferenceProfile limit = join_run.profiles.front();
            for (const auto& profile : join_run.profiles) limit = profile_join(limit, profile);
            limit_matches += limit == join_run.profiles.back();
            fixed_points += is_fixed_point(join_spec, join_run.profiles.back());
        }

        const SystemSpec meet_spec(graph, alts, meet_agents);
        const Trajectory meet_run = run(meet_spec, initial, budget);
        if (meet_run.converged_at.has_value() && *meet_run.converged_at <= round_limit) {
            ++meet_within_limit;
            PreferenceProfile limit = meet_run.profiles.front();
            for (const auto& profile : meet_run.profiles) limit = profile_meet(limit, profile);
            meet_limit_matches += limit == meet_run.profiles.back();
            meet_fixed_points += is_fixed_point(meet_spec, meet_run.profiles.back());
        }

        shared.graphs.push_back(std::move(graph));
        shared.join_trajectories.push_back(std::move(join_run));
    }

    const double elapsed = timer.seconds();
    CriterionResult result;
    result.id = 6;
    result.passed = within_limit == runs && limit_matches == runs && fixed_points == runs &&
                    meet_within_limit == runs && meet_limit_matches == runs &&
                    meet_fixed_points == runs && elapsed < 60.0;
    std::ostringstream detail;
    detail << "join: " << within_limit << "/" << runs << " converged within " << round_limit
           << " rounds (max observed " << max_round << "), " << limit_matches
           << " equal the join of iterates, " << fixed_points << " stable; meet: "
           << meet_within_limit << "/" << runs << " converged, " << meet_limit_matches
           << " equal the meet of iterates, " << meet_fixed_points << " stable";
    if (elapsed >= 60.0) detail << " [exceeded the 60 s budget]";
    result.detail = detail.str();
    result.seconds = elapsed;
    return result;
}

CriterionResult criterion_monotone_step() {
    Stopwatch timer;
    const SuiteResult suite = verification::monotone_global_step(200, 9007);
    return {7, suite.passed, suite.detail, timer.seconds()};
}

CriterionResult criterion_energy_monotone(const ConvergenceData& shared) {
    Stopwatch timer;
    long long decreases = 0;
    std::size_t rounds_checked = 0;
    for (std::size_t index = 0; index < shared.join_trajectories.size(); ++index) {
        const EnergyTrace trace =
            trajectory_metrics(shared.graphs[index], shared.join_trajectories[index]);
        for (std::size_t t = 0; t + 1 < trace.total.size(); ++t) {
            ++rounds_checked;
            decreases += trace.total[t] > trace.total[t + 1];
            for (std::size_t e = 0; e < trace.per_edge[t].size(); ++e)
                decreases += trace.per_edge[t][e] > trace.per_edge[t + 1][e];
        }
    }
    CriterionResult result;
    result.id = 8;
    result.passed = decreases == 0 && !shared.join_trajectories.empty();
    result.detail = std::to_string(shared.join_trajectories.size()) + " join trajectories, " +
                    std::to_string(rounds_checked) + " consecutive rounds, " +
                    std::to_string(decreases) + " decreases (total or per-edge)";
    result.seconds = timer.seconds();
    return result;
}

CriterionResult criterion_connectivity_effect() {
    Stopwatch timer;
    const AlternativeSet alts(5);
    const int agents = 20, t_max = 15, trials = 20;

    double mean_k4 = 0.0, mean_k8 = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        for (const int k : {4, 8}) {
            auto graph_rng = seeded_rng(8100, static_cast<std::uint64_t>(trial));
            const Graph graph = random_k_regular(agents, k, graph_rng);

            auto r_rng = seeded_rng(8200, static_cast<std::uint64_t>(trial));
            std::vector<AgentSpec> behaviors;
            for (int i = 0; i < agents; ++i)
                behaviors.push_back(AgentSpec{MessageFn::Identity,
                                              std::uniform_int_distribution<int>(1, k)(r_rng),
                                              UpdateFn::Join});

            auto init_rng = seeded_rng(8300, static_cast<std::uint64_t>(trial));
            std::vector<PreferenceRelation> relations;
            for (int i = 0; i < agents; ++i)
                relations.push_back(random_preorder(alts, 0.15, init_rng, 10000));

            const SystemSpec spec(graph, alts, behaviors);
            const Trajectory trajectory = run(spec, PreferenceProfile(relations), t_max);
            const double final_energy =
                static_cast<double>(dirichlet_energy(graph, trajectory.profiles.back()));
            (k == 4 ? mean_k4 : mean_k8) += final_energy / trials;
        }
    }

    CriterionResult result;
    result.id = 9;
    result.passed = mean_k8 > mean_k4;
    std::ostringstream detail;
    detail << trials << " paired seed trials: mean final energy k=4 is " << mean_k4
           << ", k=8 is " << mean_k8 << (result.passed ? " (strictly ordered)" : " (NOT ordered)");
    result.detail = detail.str();
    result.seconds = timer.seconds();
    return result;
}

CriterionResult criterion_cli_reproducibility(const std::string& cli_path) {
    Stopwatch timer;
    CriterionResult result;
    result.id = 10;
    if (cli_path.empty()) {
        result.detail = "no CLI path supplied (pass the prefdyn binary as the first argument)";
        return result;
    }

    std::mt19937_64 rng(std::random_device{}());
    const fs::path base = fs::temp_directory_path() / ("prefdyn_accept_" + std::to_string(rng()));
    const fs::path first = base / "first";
    const fs::path second = base / "second";
    fs::create_directories(base);

    const fs::path config_path = base / "experiment.cfg";
    {
        std::ofstream config(config_path);
        config << "alternatives = 5\nagents = 20\ngraph.k = 4\ngraph.seed = 21\n"
                  "init.p = 0.15\ninit.seed = 22\nr = random\nr.seed = 23\n"
                  "t_max = 15\ninitial_profiles = 5\n";
    }

    const auto run_cli = [&](const fs::path& config_file, const fs::path& out_dir) {
        const std::string command = "\"" + cli_path + "\" run --config \"" + config_file.string() +
                                    "\" --output \"" + out_dir.string() + "\" > /dev/null";
        return std::system(command.c_str());
    };

    const int first_status = run_cli(config_path, first);
    const int second_status = run_cli(first / "manifest.txt", second);

    const bool energy_equal = slurp(first / "energy.csv") == slurp(second / "energy.csv");
    const bool edges_equal = slurp(first / "edges.csv") == slurp(second / "edges.csv");
    result.passed = first_status == 0 && second_status == 0 && energy_equal && edges_equal;

    std::ostringstream detail;
    detail << "exit codes " << first_status << "/" << second_status << ", energy.csv "
           << (energy_equal ? "identical" : "DIFFERS") << ", edges.csv "
           << (edges_equal ? "identical" : "DIFFERS");
    result.detail = detail.str();
    result.seconds = timer.seconds();
    fs::remove_all(base);
    return result;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli_path = argc > 1 ? argv[1] : "";

    std::vector<CriterionResult> results;
    results.push_back(criterion_lattice_laws());
    results.push_back(criterion_desk_completeness());
    results.push_back(criterion_median_oracle());
    results.push_back(criterion_aggregation_axioms());
    results.push_back(criterion_tarski());
    ConvergenceData shared;
    results.push_back(criterion_convergence(shared));
    results.push_back(criterion_monotone_step());
    results.push_back(criterion_energy_monotone(shared));
    results.push_back(criterion_connectivity_effect());
    results.push_back(criterion_cli_reproducibility(cli_path));

    int failures = 0;
    for (const auto& result : results) {
        failures += !result.passed;
        std::printf("criterion %2d %s  (%.2fs)  %s\n", result.id,
                    result.passed ? "PASS" : "FAIL", result.seconds, result.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures;
}
