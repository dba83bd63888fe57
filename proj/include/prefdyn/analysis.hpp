#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "prefdyn/dynamics.hpp"

namespace prefdyn {

/// Which ordered pairs count as disagreement between two preference
/// relations.
enum class DisagreementVariant {
    Literal,  // (a,b) with a != b, a >= b held by one and b >= a by the other
    Strict,   // only strictly opposed pairs: a > b in one, b > a in the other
};

/// Count of oppositely-held ordered comparisons (a != b). Symmetric in its
/// arguments under both variants.
inline int kendall_tau(const PreferenceRelation& p1, const PreferenceRelation& p2,
                       DisagreementVariant variant = DisagreementVariant::Literal) {
    if (p1.dim() != p2.dim()) throw std::invalid_argument("kendall_tau: dimension mismatch");
    if (variant == DisagreementVariant::Literal) {
        const Relation opposed = p1.relation() & p2.relation().transposed();
        int count = opposed.pair_count();
        for (int a = 0; a < opposed.dim(); ++a)
            if (opposed.contains(a, a)) --count;
        return count;
    }
    const Relation strict1 = p1.relation().without(p1.relation().transposed());
    const Relation strict2 = p2.relation().without(p2.relation().transposed());
    return (strict1 & strict2.transposed()).pair_count();
}

/// Total disagreement across the edges of the interaction graph, each
/// undirected edge counted once.
inline long long dirichlet_energy(const Graph& g, const PreferenceProfile& profile,
                                  DisagreementVariant variant = DisagreementVariant::Literal) {
    if (profile.size() != g.agent_count())
        throw std::invalid_argument("dirichlet_energy: profile size mismatch");
    long long total = 0;
    for (const auto& [i, j] : g.edges()) total += kendall_tau(profile[i], profile[j], variant);
    return total;
}

/// Per-round disagreement traces of a trajectory. per_edge[t] follows the
/// graph's edge ordering; total[t] is its sum.
struct EnergyTrace {
    DisagreementVariant variant = DisagreementVariant::Literal;
    std::vector<long long> total;
    std::vector<std::vector<int>> per_edge;
};

inline EnergyTrace trajectory_metrics(const Graph& g, const Trajectory& trajectory,
                                      DisagreementVariant variant = DisagreementVariant::Literal) {
    if (trajectory.profiles.empty())
        throw std::invalid_argument("trajectory_metrics: empty trajectory");
    EnergyTrace trace;
    trace.variant = variant;
    trace.total.reserve(trajectory.profiles.size());
    trace.per_edge.reserve(trajectory.profiles.size());
    for (const auto& profile : trajectory.profiles) {
        std::vector<int> row;
        row.reserve(g.edges().size());
        long long sum = 0;
        for (const auto& [i, j] : g.edges()) {
            const int d = kendall_tau(profile[i], profile[j], variant);
            row.push_back(d);
            sum += d;
        }
        trace.per_edge.push_back(std::move(row));
        trace.total.push_back(sum);
    }
    return trace;
}

/// The stable profiles of a spec, found exhaustively, with the extremes
/// when they exist within the set.
struct FixedPointSet {
    std::vector<PreferenceProfile> points;
    std::optional<PreferenceProfile> minimum;
    std::optional<PreferenceProfile> maximum;
};

/// Scan the full product of preorders over all agents and keep the fixed
/// points of the global step. Capped at |A| <= 3 and n <= 3 agents (29^3
/// profiles at the limit).
inline FixedPointSet enumerate_fixed_points(const SystemSpec& spec) {
    const int n = spec.agent_count();
    const int alts = spec.alternatives().size();
    if (alts > 3 || n > 3)
        throw std::length_error("enumerate_fixed_points: capped at |A| <= 3 and n <= 3");

    const std::vector<PreferenceRelation> lattice = enumerate_preorders(spec.alternatives());
    FixedPointSet out;

    std::vector<std::size_t> index(static_cast<std::size_t>(n), 0);
    while (true) {
        std::vector<PreferenceRelation> relations;
        relations.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) relations.push_back(lattice[index[i]]);
        PreferenceProfile profile(std::move(relations));
        if (is_fixed_point(spec, profile)) out.points.push_back(std::move(profile));

        int pos = n - 1;
        while (pos >= 0 && ++index[pos] == lattice.size()) index[pos--] = 0;
        if (pos < 0) break;
    }

    for (const auto& candidate : out.points) {
        bool below_all = true, above_all = true;
        for (const auto& other : out.points) {
            below_all = below_all && leq(candidate, other);
            above_all = above_all && leq(other, candidate);
            if (!below_all && !above_all) break;
        }
        if (below_all) out.minimum = candidate;
        if (above_all) out.maximum = candidate;
    }
    return out;
}

struct LatticeCheckReport {
    std::size_t pairs_checked = 0;
    std::size_t missing_lub = 0;
    std::size_t missing_glb = 0;
    std::size_t join_differs_from_ambient = 0;
    std::size_t meet_differs_from_ambient = 0;

    bool is_lattice() const noexcept { return missing_lub == 0 && missing_glb == 0; }
};

/// For every pair of points verify that a least upper bound and a greatest
/// lower bound exist within the set under the product information order,
/// and count how often these differ from the ambient componentwise join and
/// meet. O(|points|^3).
inline LatticeCheckReport verify_lattice(std::span<const PreferenceProfile> points) {
    LatticeCheckReport report;
    const std::size_t size = points.size();
    for (std::size_t x = 0; x < size; ++x) {
        for (std::size_t y = x + 1; y < size; ++y) {
            ++report.pairs_checked;

            std::vector<std::size_t> uppers, lowers;
            for (std::size_t z = 0; z < size; ++z) {
                if (leq(points[x], points[z]) && leq(points[y], points[z])) uppers.push_back(z);
                if (leq(points[z], points[x]) && leq(points[z], points[y])) lowers.push_back(z);
            }

            const PreferenceProfile* lub = nullptr;
            for (std::size_t u : uppers) {
                bool least = true;
                for (std::size_t v : uppers)
                    if (!leq(points[u], points[v])) {
                        least = false;
                        break;
                    }
                if (least) {
                    lub = &points[u];
                    break;
                }
            }
            const PreferenceProfile* glb = nullptr;
            for (std::size_t u : lowers) {
                bool greatest = true;
                for (std::size_t v : lowers)
                    if (!leq(points[v], points[u])) {
                        greatest = false;
                        break;
                    }
                if (greatest) {
                    glb = &points[u];
                    break;
                }
            }

            if (lub == nullptr)
                ++report.missing_lub;
            else if (!(*lub == profile_join(points[x], points[y])))
                ++report.join_differs_from_ambient;

            if (glb == nullptr)
                ++report.missing_glb;
            else if (!(*glb == profile_meet(points[x], points[y])))
                ++report.meet_differs_from_ambient;
        }
    }
    return report;
}

}  // namespace prefdyn
