#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prefdyn/errors.hpp"
#include "prefdyn/relation.hpp"

namespace prefdyn {

/// A preorder on the alternative set: reflexive and transitive. The
/// constructor rejects anything else, so a value of this type always
/// satisfies both axioms. Under set inclusion ("more comparisons revealed")
/// the preorders on a fixed alternative set form a complete lattice with
/// meet = intersection and join = closure of the union.
class PreferenceRelation {
public:
    explicit PreferenceRelation(Relation rel) : rel_(std::move(rel)) {
        if (!is_reflexive(rel_))
            throw std::invalid_argument("PreferenceRelation: relation is not reflexive");
        if (!is_transitive(rel_))
            throw std::invalid_argument("PreferenceRelation: relation is not transitive");
    }

    const Relation& relation() const noexcept { return rel_; }
    int dim() const noexcept { return rel_.dim(); }
    bool contains(int a, int b) const { return rel_.contains(a, b); }

    friend bool operator==(const PreferenceRelation&, const PreferenceRelation&) = default;

private:
    Relation rel_;
};

/// Minimum of the information order: only the diagonal, nothing compared yet.
inline PreferenceRelation bottom(const AlternativeSet& alternatives) {
    return PreferenceRelation(Relation::diagonal(alternatives.size()));
}

/// Maximum of the information order: every pair held, total indifference.
inline PreferenceRelation top(const AlternativeSet& alternatives) {
    return PreferenceRelation(Relation::full(alternatives.size()));
}

/// Smallest preorder containing r. Inflationary, monotone, and idempotent.
inline PreferenceRelation transitive_reflexive_closure(const Relation& r) {
    return PreferenceRelation(transitive_closure(r | Relation::diagonal(r.dim())));
}

/// Greatest lower bound: the comparisons held by both.
inline PreferenceRelation meet(const PreferenceRelation& p1, const PreferenceRelation& p2) {
    return PreferenceRelation(p1.relation() & p2.relation());
}

/// Least upper bound: the closure of everything held by either.
inline PreferenceRelation join(const PreferenceRelation& p1, const PreferenceRelation& p2) {
    return transitive_reflexive_closure(p1.relation() | p2.relation());
}

/// Meet of a family; the empty family yields top().
inline PreferenceRelation meet_many(const AlternativeSet& alternatives,
                                    std::span<const PreferenceRelation> relations) {
    Relation acc = Relation::full(alternatives.size());
    for (const auto& p : relations) acc &= p.relation();
    return PreferenceRelation(std::move(acc));
}

/// Join of a family; the empty family yields bottom().
inline PreferenceRelation join_many(const AlternativeSet& alternatives,
                                    std::span<const PreferenceRelation> relations) {
    Relation acc(alternatives.size());
    for (const auto& p : relations) acc |= p.relation();
    return transitive_reflexive_closure(acc);
}

inline InformationOrder compare(const PreferenceRelation& p1, const PreferenceRelation& p2) {
    return compare(p1.relation(), p2.relation());
}

inline bool leq(const PreferenceRelation& p1, const PreferenceRelation& p2) {
    return p1.relation().subset_of(p2.relation());
}

/// Transpose: reverses the relative ordering of every pair of alternatives.
inline PreferenceRelation converse(const PreferenceRelation& p) {
    return PreferenceRelation(p.relation().transposed());
}

/// Which of the two joined relations covers one step of a witness chain.
enum class ChainSource : unsigned char { First = 1, Second = 2, Both = 3 };

/// A path a = c0, c1, ..., cl = b whose every step lies in at least one of
/// the joined relations. sources[m] labels the step from alternatives[m] to
/// alternatives[m+1].
struct JoinChain {
    std::vector<int> alternatives;
    std::vector<ChainSource> sources;
};

/// Explain why (a,b) belongs to join(p1, p2): a stepwise chain through the
/// union digraph, found by breadth-first search. Returns nullopt exactly
/// when (a,b) is not in the join.
inline std::optional<JoinChain> join_chain_witness(const PreferenceRelation& p1,
                                                   const PreferenceRelation& p2, int a, int b) {
    if (p1.dim() != p2.dim())
        throw std::invalid_argument("join_chain_witness: dimension mismatch");
    const int dim = p1.dim();
    if (a < 0 || a >= dim || b < 0 || b >= dim)
        throw std::out_of_range("join_chain_witness: index out of range");
    if (a == b) return JoinChain{{a}, {}};

    const Relation all = p1.relation() | p2.relation();
    std::vector<int> parent(dim, -1);
    std::vector<char> seen(dim, 0);
    std::vector<int> queue{a};
    seen[a] = 1;
    for (std::size_t head = 0; head < queue.size() && !seen[b]; ++head) {
        const int u = queue[head];
        all.for_each_related(u, [&](int v) {
            if (!seen[v]) {
                seen[v] = 1;
                parent[v] = u;
                queue.push_back(v);
            }
        });
    }
    if (!seen[b]) return std::nullopt;

    JoinChain chain;
    for (int v = b; v != -1; v = parent[v]) chain.alternatives.push_back(v);
    std::reverse(chain.alternatives.begin(), chain.alternatives.end());
    for (std::size_t m = 0; m + 1 < chain.alternatives.size(); ++m) {
        const int u = chain.alternatives[m];
        const int v = chain.alternatives[m + 1];
        const unsigned tag = (p1.contains(u, v) ? 1u : 0u) | (p2.contains(u, v) ? 2u : 0u);
        chain.sources.push_back(static_cast<ChainSource>(tag));
    }
    return chain;
}

/// All preorders on the alternative set, each exactly once, in a fixed
/// deterministic order (ascending off-diagonal bit patterns). Sizes through
/// 4 (355 preorders) are always allowed; size 5 (6942 preorders) must be
/// opted into because products over agents grow quickly.
inline std::vector<PreferenceRelation> enumerate_preorders(const AlternativeSet& alternatives,
                                                           bool allow_size_five = false) {
    const int n = alternatives.size();
    const int cap = allow_size_five ? 5 : 4;
    if (n > cap)
        throw std::length_error("enumerate_preorders: capacity exceeded, |A| capped at " +
                                std::to_string(cap));

    std::vector<std::pair<int, int>> cells;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) cells.emplace_back(a, b);

    std::vector<PreferenceRelation> out;
    const std::uint64_t limit = std::uint64_t{1} << cells.size();
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        Relation r = Relation::diagonal(n);
        for (std::size_t t = 0; t < cells.size(); ++t)
            if ((mask >> t) & 1u) r.insert(cells[t].first, cells[t].second);
        if (is_transitive(r)) out.emplace_back(std::move(r));
    }
    return out;
}

/// Rejection-sample a preorder: include each off-diagonal pair independently
/// with probability p, keep the diagonal, accept once transitive. Throws
/// RetryExhaustedError after max_rejects failed attempts.
inline PreferenceRelation random_preorder(const AlternativeSet& alternatives, double p,
                                          std::mt19937_64& rng, int max_rejects) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("random_preorder: p must lie in [0, 1]");
    if (max_rejects < 1)
        throw std::invalid_argument("random_preorder: max_rejects must be at least 1");

    const int n = alternatives.size();
    std::bernoulli_distribution flip(p);
    for (int attempt = 1; attempt <= max_rejects; ++attempt) {
        Relation r = Relation::diagonal(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b && flip(rng)) r.insert(a, b);
        if (is_transitive(r)) return PreferenceRelation(std::move(r));
    }
    throw RetryExhaustedError("random_preorder: no transitive sample within " +
                                  std::to_string(max_rejects) + " attempts",
                              max_rejects);
}

}  // namespace prefdyn
