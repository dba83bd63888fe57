#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "prefdyn/analysis.hpp"
#include "prefdyn/experiment.hpp"

namespace prefdyn {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Seeded self-check suites behind `prefdyn verify`. Each suite replays the
/// algebraic laws and oracle equivalences on freshly sampled inputs and
/// reports the violation counts.
namespace verification {

inline Relation sample_relation(int dim, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution flip(density);
    Relation r(dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            if (flip(rng)) r.insert(a, b);
    return r;
}

/// Preorder sampling for law checks: close a random raw relation. Broader
/// coverage than rejection sampling and never retries.
inline PreferenceRelation sample_preorder(const AlternativeSet& alternatives, double density,
                                          std::mt19937_64& rng) {
    return transitive_reflexive_closure(sample_relation(alternatives.size(), density, rng));
}

/// Commutativity, associativity, idempotence, absorption, and monotonicity
/// of meet/join, plus the closure-operator laws (inflationary, monotone,
/// idempotent) of the transitive-reflexive closure.
inline SuiteResult lattice_laws(int alternatives = 5, int trials = 1000, std::uint64_t seed = 11) {
    const AlternativeSet alts(alternatives);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> density(0.05, 0.5);

    long long violations = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const PreferenceRelation x = sample_preorder(alts, density(rng), rng);
        const PreferenceRelation y = sample_preorder(alts, density(rng), rng);
        const PreferenceRelation z = sample_preorder(alts, density(rng), rng);

        violations += !(meet(x, y) == meet(y, x));
        violations += !(join(x, y) == join(y, x));
        violations += !(meet(x, meet(y, z)) == meet(meet(x, y), z));
        violations += !(join(x, join(y, z)) == join(join(x, y), z));
        violations += !(meet(x, x) == x);
        violations += !(join(x, x) == x);
        violations += !(join(x, meet(x, y)) == x);
        violations += !(meet(x, join(x, y)) == x);

        // monotonicity in each argument: grow one argument, outputs may only grow
        const PreferenceRelation grown = join(x, y);
        violations += !leq(meet(x, z), meet(grown, z));
        violations += !leq(join(x, z), join(grown, z));
        violations += !leq(meet(z, x), meet(z, grown));
        violations += !leq(join(z, x), join(z, grown));

        const Relation raw = sample_relation(alternatives, density(rng), rng);
        const Relation raw_grown = raw | sample_relation(alternatives, density(rng), rng);
        const PreferenceRelation closed = transitive_reflexive_closure(raw);
        violations += !raw.subset_of(closed.relation());
        violations += !leq(closed, transitive_reflexive_closure(raw_grown));
        violations += !(transitive_reflexive_closure(closed.relation()) == closed);
    }

    SuiteResult result;
    result.name = "lattice and closure laws";
    result.passed = violations == 0;
    result.detail = std::to_string(trials) + " random triples at |A|=" +
                    std::to_string(alternatives) + ", " + std::to_string(violations) +
                    " violations";
    return result;
}

/// At |A|=3 the 29 preorders are enumerated; binary join/meet must match
/// the least upper bound / greatest lower bound found by exhaustive search,
/// and the extremes must be unique.
inline SuiteResult desk_scale_completeness() {
    const AlternativeSet alts(3);
    const auto lattice = enumerate_preorders(alts);

    SuiteResult result;
    result.name = "desk-scale completeness (|A|=3)";
    if (lattice.size() != 29) {
        result.detail = "expected 29 preorders, enumerated " + std::to_string(lattice.size());
        return result;
    }

    long long mismatches = 0;
    for (const auto& p : lattice)
        for (const auto& q : lattice) {
            const PreferenceRelation joined = join(p, q);
            const PreferenceRelation met = meet(p, q);

            const PreferenceRelation* lub = nullptr;
            const PreferenceRelation* glb = nullptr;
            for (const auto& candidate : lattice) {
                if (leq(p, candidate) && leq(q, candidate) &&
                    (lub == nullptr || leq(candidate, *lub)))
                    lub = &candidate;
                if (leq(candidate, p) && leq(candidate, q) &&
                    (glb == nullptr || leq(*glb, candidate)))
                    glb = &candidate;
            }
            // the scan above finds *a* minimal/maximal bound; confirm it bounds all
            bool lub_least = lub != nullptr;
            bool glb_greatest = glb != nullptr;
            for (const auto& candidate : lattice) {
                if (leq(p, candidate) && leq(q, candidate) && !leq(*lub, candidate))
                    lub_least = false;
                if (leq(candidate, p) && leq(candidate, q) && !leq(candidate, *glb))
                    glb_greatest = false;
            }
            mismatches += !(lub_least && *lub == joined);
            mismatches += !(glb_greatest && *glb == met);
        }

    int bottoms = 0, tops = 0;
    for (const auto& p : lattice) {
        bool is_min = true, is_max = true;
        for (const auto& q : lattice) {
            is_min = is_min && leq(p, q);
            is_max = is_max && leq(q, p);
        }
        bottoms += is_min && p == bottom(alts);
        tops += is_max && p == top(alts);
        mismatches += (is_min && !(p == bottom(alts))) || (is_max && !(p == top(alts)));
    }
    mismatches += (bottoms != 1) + (tops != 1);

    result.passed = mismatches == 0;
    result.detail = "29 preorders, all 841 pairs, " + std::to_string(mismatches) + " mismatches";
    return result;
}

/// Threshold-count median against the literal subset formula, plus the
/// r=1 == join and r=n == meet identities.
inline SuiteResult median_matches_bruteforce(int instances = 500, std::uint64_t seed = 12) {
    const AlternativeSet alts(4);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> tuple_size(1, 6);
    std::uniform_real_distribution<double> density(0.05, 0.5);

    long long mismatches = 0;
    for (int instance = 0; instance < instances; ++instance) {
        const int n = tuple_size(rng);
        std::vector<PreferenceRelation> relations;
        relations.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) relations.push_back(sample_preorder(alts, density(rng), rng));

        for (int r = 1; r <= n; ++r)
            mismatches += !(median(r, relations) == median_bruteforce(r, relations));
        mismatches += !(median(1, relations) == join_many(alts, relations));
        mismatches += !(median(n, relations) == meet_many(alts, relations));
    }

    SuiteResult result;
    result.name = "median oracle equivalence";
    result.passed = mismatches == 0;
    result.detail = std::to_string(instances) + " instances (n<=6, |A|=4), " +
                    std::to_string(mismatches) + " mismatches";
    return result;
}

/// Anonymity, unanimity, and chain behavior of the median.
inline SuiteResult aggregation_axioms(int tuple_count = 100, int permutations = 50,
                                      std::uint64_t seed = 13) {
    const AlternativeSet alts(4);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> density(0.05, 0.5);

    AggregationAxiomReport combined;
    for (int r = 1; r <= 5; ++r) {
        std::vector<std::vector<PreferenceRelation>> tuples;
        for (int t = 0; t < tuple_count / 5; ++t) {
            std::vector<PreferenceRelation> tuple;
            for (int i = 0; i < 5; ++i) tuple.push_back(sample_preorder(alts, density(rng), rng));
            tuples.push_back(std::move(tuple));
        }
        const auto aggregate = [r](std::span<const PreferenceRelation> input) {
            return median(r, input);
        };
        const AggregationAxiomReport report =
            check_aggregation_axioms(aggregate, r, tuples, rng, permutations);
        combined.anonymity_trials += report.anonymity_trials;
        combined.anonymity_violations += report.anonymity_violations;
        combined.unanimity_trials += report.unanimity_trials;
        combined.unanimity_violations += report.unanimity_violations;
        combined.chain_trials += report.chain_trials;
        combined.chain_violations += report.chain_violations;
        combined.chain_matches_index_r += report.chain_matches_index_r;
        combined.note = report.note;
    }

    SuiteResult result;
    result.name = "aggregation axioms (median)";
    result.passed = combined.passed();
    std::ostringstream detail;
    detail << combined.anonymity_trials << " permutation trials ("
           << combined.anonymity_violations << " violations), " << combined.unanimity_trials
           << " unanimity trials (" << combined.unanimity_violations << " violations), "
           << combined.chain_trials << " chain trials (" << combined.chain_violations
           << " violations; result equalled the r-th chain element in "
           << combined.chain_matches_index_r << "); note: " << combined.note;
    result.detail = detail.str();
    return result;
}

/// Membership in join(p1, p2) must coincide exactly with the existence of a
/// witness chain, for every ordered pair of alternatives.
inline SuiteResult join_witness_equivalence(int instances = 200, std::uint64_t seed = 14) {
    const AlternativeSet alts(5);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> density(0.05, 0.4);

    long long mismatches = 0;
    for (int instance = 0; instance < instances; ++instance) {
        const PreferenceRelation p1 = sample_preorder(alts, density(rng), rng);
        const PreferenceRelation p2 = sample_preorder(alts, density(rng), rng);
        const PreferenceRelation joined = join(p1, p2);
        for (int a = 0; a < alts.size(); ++a)
            for (int b = 0; b < alts.size(); ++b) {
                const auto witness = join_chain_witness(p1, p2, a, b);
                if (witness.has_value() != joined.contains(a, b)) {
                    ++mismatches;
                    continue;
                }
                if (!witness) continue;
                // chain must start at a, end at b, and every step must lie in its tagged source
                const auto& chain = *witness;
                if (chain.alternatives.front() != a || chain.alternatives.back() != b) ++mismatches;
                for (std::size_t m = 0; m + 1 < chain.alternatives.size(); ++m) {
                    const int u = chain.alternatives[m], v = chain.alternatives[m + 1];
                    const auto tag = static_cast<unsigned>(chain.sources[m]);
                    const bool in1 = p1.contains(u, v), in2 = p2.contains(u, v);
                    if (((tag & 1u) && !in1) || ((tag & 2u) && !in2) || tag == 0) ++mismatches;
                }
            }
    }

    SuiteResult result;
    result.name = "join chain witness equivalence";
    result.passed = mismatches == 0;
    result.detail = std::to_string(instances) + " instances at |A|=5, all pairs, " +
                    std::to_string(mismatches) + " mismatches";
    return result;
}

/// Membership in the median must coincide with the existence of a coalition
/// chain whose every coalition meets the threshold.
inline SuiteResult coalition_witness_equivalence(int instances = 100, std::uint64_t seed = 15) {
    const AlternativeSet alts(5);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> density(0.05, 0.4);
    std::uniform_int_distribution<int> tuple_size(1, 5);

    long long mismatches = 0;
    for (int instance = 0; instance < instances; ++instance) {
        const int n = tuple_size(rng);
        const int r = std::uniform_int_distribution<int>(1, n)(rng);
        std::vector<PreferenceRelation> relations;
        for (int i = 0; i < n; ++i) relations.push_back(sample_preorder(alts, density(rng), rng));

        const PreferenceRelation aggregate = median(r, relations);
        for (int a = 0; a < alts.size(); ++a)
            for (int b = 0; b < alts.size(); ++b) {
                const auto witness = coalition_witness(r, relations, a, b);
                if (witness.has_value() != aggregate.contains(a, b)) {
                    ++mismatches;
                    continue;
                }
                if (!witness) continue;
                for (std::size_t m = 0; m + 1 < witness->alternatives.size(); ++m) {
                    const auto& coalition = witness->coalitions[m];
                    if (static_cast<int>(coalition.size()) < r) ++mismatches;
                    const int u = witness->alternatives[m], v = witness->alternatives[m + 1];
                    for (int member : coalition)
                        if (!relations[static_cast<std::size_t>(member)].contains(u, v))
                            ++mismatches;
                }
            }
    }

    SuiteResult result;
    result.name = "coalition witness equivalence";
    result.passed = mismatches == 0;
    result.detail = std::to_string(instances) + " instances, all pairs, " +
                    std::to_string(mismatches) + " mismatches";
    return result;
}

inline SystemSpec sample_join_spec(int agents, int k, const AlternativeSet& alts,
                                   std::mt19937_64& rng, UpdateFn update = UpdateFn::Join) {
    Graph graph = random_k_regular(agents, k, rng);
    std::vector<AgentSpec> behaviors;
    behaviors.reserve(static_cast<std::size_t>(agents));
    for (int i = 0; i < agents; ++i) {
        const int degree = graph.degree(i);
        const int r = degree >= 1 ? std::uniform_int_distribution<int>(1, degree)(rng) : 1;
        behaviors.push_back(AgentSpec{MessageFn::Identity, r, update});
    }
    return SystemSpec(std::move(graph), alts, std::move(behaviors));
}

inline PreferenceProfile sample_profile(int agents, const AlternativeSet& alts, double density,
                                        std::mt19937_64& rng) {
    std::vector<PreferenceRelation> relations;
    relations.reserve(static_cast<std::size_t>(agents));
    for (int i = 0; i < agents; ++i) relations.push_back(sample_preorder(alts, density, rng));
    return PreferenceProfile(std::move(relations));
}

/// For ordered profile pairs under identity/median/join specs, the global
/// step must preserve the product order.
inline SuiteResult monotone_global_step(int pairs = 200, std::uint64_t seed = 16) {
    const AlternativeSet alts(4);
    std::mt19937_64 rng(seed);

    long long violations = 0;
    for (int pair = 0; pair < pairs; ++pair) {
        const int agents = std::uniform_int_distribution<int>(4, 10)(rng);
        int k = std::uniform_int_distribution<int>(1, 3)(rng);
        if ((agents * k) % 2 != 0) k = (k < 3) ? k + 1 : 2;

        const SystemSpec spec = sample_join_spec(agents, k, alts, rng);
        const PreferenceProfile lower = sample_profile(agents, alts, 0.2, rng);
        const PreferenceProfile upper =
            profile_join(lower, sample_profile(agents, alts, 0.2, rng));

        if (!leq(global_step(spec, lower), global_step(spec, upper))) ++violations;
    }

    SuiteResult result;
    result.name = "global step monotone";
    result.passed = violations == 0;
    result.detail = std::to_string(pairs) + " ordered profile pairs, " +
                    std::to_string(violations) + " violations";
    return result;
}

/// Join-update runs must converge, ascend round by round, and end at the
/// agentwise join of everything visited; meet-update runs dually.
inline SuiteResult convergence_and_limits(int runs = 20, std::uint64_t seed = 17) {
    const AlternativeSet alts(4);
    std::mt19937_64 rng(seed);
    long long failures = 0;

    for (int index = 0; index < runs; ++index) {
        for (const UpdateFn update : {UpdateFn::Join, UpdateFn::Meet}) {
            const int agents = 10;
            const SystemSpec spec = sample_join_spec(agents, 3, alts, rng, update);
            const PreferenceProfile initial = sample_profile(agents, alts, 0.2, rng);
            const int bound = alts.size() * alts.size() * agents + 1;
            const Trajectory trajectory = run(spec, initial, bound);

            if (!trajectory.converged_at.has_value()) {
                ++failures;
                continue;
            }
            PreferenceProfile limit = trajectory.profiles.front();
            for (const auto& profile : trajectory.profiles)
                limit = update == UpdateFn::Join ? profile_join(limit, profile)
                                                 : profile_meet(limit, profile);
            failures += !(limit == trajectory.profiles.back());
            failures += !is_fixed_point(spec, trajectory.profiles.back());
            for (std::size_t t = 0; t + 1 < trajectory.profiles.size(); ++t) {
                const bool ordered = update == UpdateFn::Join
                                         ? leq(trajectory.profiles[t], trajectory.profiles[t + 1])
                                         : leq(trajectory.profiles[t + 1], trajectory.profiles[t]);
                failures += !ordered;
            }
        }
    }

    SuiteResult result;
    result.name = "finite-time convergence and limits";
    result.passed = failures == 0;
    result.detail = std::to_string(runs) + " join runs and " + std::to_string(runs) +
                    " meet runs, " + std::to_string(failures) + " failures";
    return result;
}

/// Under the join update, per-edge disagreement and the total energy must
/// never decrease along a trajectory.
inline SuiteResult energy_monotone(int runs = 10, std::uint64_t seed = 18) {
    const AlternativeSet alts(5);
    std::mt19937_64 rng(seed);
    long long failures = 0;

    for (int index = 0; index < runs; ++index) {
        const int agents = 12;
        const SystemSpec spec = sample_join_spec(agents, 4, alts, rng);
        const PreferenceProfile initial = sample_profile(agents, alts, 0.15, rng);
        const Trajectory trajectory = run(spec, initial, 50);
        const EnergyTrace trace = trajectory_metrics(spec.graph(), trajectory);

        for (std::size_t t = 0; t + 1 < trace.total.size(); ++t) {
            failures += trace.total[t] > trace.total[t + 1];
            for (std::size_t e = 0; e < trace.per_edge[t].size(); ++e)
                failures += trace.per_edge[t][e] > trace.per_edge[t + 1][e];
        }
    }

    SuiteResult result;
    result.name = "energy monotone under join update";
    result.passed = failures == 0;
    result.detail = std::to_string(runs) + " trajectories, " + std::to_string(failures) +
                    " decreases";
    return result;
}

inline std::vector<SuiteResult> run_all(std::uint64_t seed = 7) {
    return {
        lattice_laws(5, 1000, seed + 1),
        desk_scale_completeness(),
        median_matches_bruteforce(500, seed + 2),
        aggregation_axioms(100, 50, seed + 3),
        join_witness_equivalence(200, seed + 4),
        coalition_witness_equivalence(100, seed + 5),
        monotone_global_step(200, seed + 6),
        convergence_and_limits(20, seed + 7),
        energy_monotone(10, seed + 8),
    };
}

}  // namespace verification
}  // namespace prefdyn
