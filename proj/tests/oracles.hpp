#pragma once

// Test-only reference implementations. Deliberately naive loops, independent
// of the library's bit-parallel code paths, so the two routes can check each
// other.

#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <prefdyn/preorder.hpp>

namespace oracle {

inline prefdyn::Relation relation_from_pairs(int dim,
                                             std::initializer_list<std::pair<int, int>> pairs) {
    prefdyn::Relation r(dim);
    for (const auto& [a, b] : pairs) r.insert(a, b);
    return r;
}

/// Diagonal plus the given pairs, closed; shorthand for building small
/// preorders in examples.
inline prefdyn::PreferenceRelation preorder_of(int dim,
                                               std::initializer_list<std::pair<int, int>> pairs) {
    return prefdyn::transitive_reflexive_closure(relation_from_pairs(dim, pairs));
}

/// Composition by enumerating all (a, c, b) triples.
inline prefdyn::Relation compose(const prefdyn::Relation& first,
                                 const prefdyn::Relation& second) {
    prefdyn::Relation result(first.dim());
    for (int a = 0; a < first.dim(); ++a)
        for (int c = 0; c < first.dim(); ++c)
            for (int b = 0; b < first.dim(); ++b)
                if (first.contains(a, c) && second.contains(c, b)) result.insert(a, b);
    return result;
}

/// Union of iterated compositions, grown until it stops changing.
inline prefdyn::Relation closure_by_iterated_composition(const prefdyn::Relation& r) {
    prefdyn::Relation acc = r;
    prefdyn::Relation power = r;
    while (true) {
        power = oracle::compose(power, r);
        const prefdyn::Relation next = acc | power;
        if (next == acc) return acc;
        acc = next;
    }
}

/// Disagreement count by scanning every ordered pair.
inline int kendall(const prefdyn::PreferenceRelation& p1, const prefdyn::PreferenceRelation& p2,
                   bool strict = false) {
    int count = 0;
    for (int a = 0; a < p1.dim(); ++a)
        for (int b = 0; b < p1.dim(); ++b) {
            if (a == b) continue;
            if (!strict) {
                count += p1.contains(a, b) && p2.contains(b, a);
            } else {
                const bool strict1 = p1.contains(a, b) && !p1.contains(b, a);
                const bool strict2 = p2.contains(b, a) && !p2.contains(a, b);
                count += strict1 && strict2;
            }
        }
    return count;
}

/// Least upper bound of {p, q} found by scanning a full enumeration of the
/// lattice; nullopt when no candidate bounds all others.
inline std::optional<prefdyn::PreferenceRelation> least_upper_bound(
    std::span<const prefdyn::PreferenceRelation> lattice, const prefdyn::PreferenceRelation& p,
    const prefdyn::PreferenceRelation& q) {
    std::vector<const prefdyn::PreferenceRelation*> uppers;
    for (const auto& candidate : lattice)
        if (leq(p, candidate) && leq(q, candidate)) uppers.push_back(&candidate);
    for (const auto* candidate : uppers) {
        bool least = true;
        for (const auto* other : uppers)
            if (!leq(*candidate, *other)) {
                least = false;
                break;
            }
        if (least) return *candidate;
    }
    return std::nullopt;
}

inline std::optional<prefdyn::PreferenceRelation> greatest_lower_bound(
    std::span<const prefdyn::PreferenceRelation> lattice, const prefdyn::PreferenceRelation& p,
    const prefdyn::PreferenceRelation& q) {
    std::vector<const prefdyn::PreferenceRelation*> lowers;
    for (const auto& candidate : lattice)
        if (leq(candidate, p) && leq(candidate, q)) lowers.push_back(&candidate);
    for (const auto* candidate : lowers) {
        bool greatest = true;
        for (const auto* other : lowers)
            if (!leq(*other, *candidate)) {
                greatest = false;
                break;
            }
        if (greatest) return *candidate;
    }
    return std::nullopt;
}

/// Closure-based sampler for test inputs: close a random raw relation.
inline prefdyn::PreferenceRelation sample_preorder(const prefdyn::AlternativeSet& alternatives,
                                                   double density, std::mt19937_64& rng) {
    std::bernoulli_distribution flip(density);
    prefdyn::Relation r(alternatives.size());
    for (int a = 0; a < alternatives.size(); ++a)
        for (int b = 0; b < alternatives.size(); ++b)
            if (flip(rng)) r.insert(a, b);
    return prefdyn::transitive_reflexive_closure(r);
}

}  // namespace oracle
