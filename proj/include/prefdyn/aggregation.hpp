#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prefdyn/preorder.hpp"

namespace prefdyn {

/// Term built from variables, meets, and joins. Evaluation substitutes one
/// preference relation per variable; by construction it is monotone in
/// every argument under the product information order.
class LatticePolynomial {
public:
    static LatticePolynomial var(int index) {
        if (index < 0) throw std::invalid_argument("LatticePolynomial: negative variable index");
        LatticePolynomial p;
        p.nodes_.push_back({Op::Var, index, -1});
        p.arity_ = index + 1;
        return p;
    }

    static LatticePolynomial meet_of(LatticePolynomial lhs, LatticePolynomial rhs) {
        return combine(Op::Meet, std::move(lhs), std::move(rhs));
    }

    static LatticePolynomial join_of(LatticePolynomial lhs, LatticePolynomial rhs) {
        return combine(Op::Join, std::move(lhs), std::move(rhs));
    }

    /// One past the largest variable index used.
    int arity() const noexcept { return arity_; }

    PreferenceRelation evaluate(std::span<const PreferenceRelation> args) const {
        if (static_cast<int>(args.size()) < arity_)
            throw std::invalid_argument("LatticePolynomial: unbound variable, need " +
                                        std::to_string(arity_) + " arguments, got " +
                                        std::to_string(args.size()));
        std::vector<PreferenceRelation> values;
        values.reserve(nodes_.size());
        for (const Node& node : nodes_) {
            switch (node.op) {
                case Op::Var: values.push_back(args[node.lhs]); break;
                case Op::Meet: values.push_back(meet(values[node.lhs], values[node.rhs])); break;
                case Op::Join: values.push_back(join(values[node.lhs], values[node.rhs])); break;
            }
        }
        return values.back();
    }

private:
    enum class Op : unsigned char { Var, Meet, Join };

    // For Var nodes lhs holds the variable index; otherwise lhs/rhs are
    // node indices, always smaller than the node's own index.
    struct Node {
        Op op;
        int lhs;
        int rhs;
    };

    static LatticePolynomial combine(Op op, LatticePolynomial lhs, LatticePolynomial rhs) {
        const int offset = static_cast<int>(lhs.nodes_.size());
        for (Node node : rhs.nodes_) {
            if (node.op != Op::Var) {
                node.lhs += offset;
                node.rhs += offset;
            }
            lhs.nodes_.push_back(node);
        }
        const int rhs_root = static_cast<int>(lhs.nodes_.size()) - 1;
        lhs.nodes_.push_back({op, offset - 1, rhs_root});
        lhs.arity_ = std::max(lhs.arity_, rhs.arity_);
        return lhs;
    }

    std::vector<Node> nodes_;
    int arity_ = 0;
};

inline PreferenceRelation eval_polynomial(const LatticePolynomial& poly,
                                          std::span<const PreferenceRelation> args) {
    return poly.evaluate(args);
}

/// How an agent turns its own preference and an estimate of the receiver's
/// preference into an outgoing message.
enum class MessageFn : unsigned char {
    Identity,  // report the held preference as-is
    Converse,  // report every comparison reversed
    Mirror,    // echo the receiver's estimated preference back
};

/// Message functions that ignore the receiver estimate.
inline bool is_isotropic(MessageFn fn) noexcept { return fn != MessageFn::Mirror; }

inline PreferenceRelation apply_message(MessageFn fn, const PreferenceRelation& sender,
                                        const PreferenceRelation& receiver_estimate) {
    switch (fn) {
        case MessageFn::Identity: return sender;
        case MessageFn::Converse: return converse(sender);
        case MessageFn::Mirror: return receiver_estimate;
    }
    throw std::logic_error("apply_message: unknown message function");
}

/// How an agent folds the aggregated messages into its prior preference.
enum class UpdateFn : unsigned char { Prior, Posterior, Meet, Join };

inline PreferenceRelation apply_update(UpdateFn fn, const PreferenceRelation& prior,
                                       const PreferenceRelation& aggregate) {
    switch (fn) {
        case UpdateFn::Prior: return prior;
        case UpdateFn::Posterior: return aggregate;
        case UpdateFn::Meet: return meet(prior, aggregate);
        case UpdateFn::Join: return join(prior, aggregate);
    }
    throw std::logic_error("apply_update: unknown update function");
}

/// Every update rule as a two-variable polynomial over (prior, aggregate).
inline LatticePolynomial update_polynomial(UpdateFn fn) {
    switch (fn) {
        case UpdateFn::Prior: return LatticePolynomial::var(0);
        case UpdateFn::Posterior: return LatticePolynomial::var(1);
        case UpdateFn::Meet:
            return LatticePolynomial::meet_of(LatticePolynomial::var(0), LatticePolynomial::var(1));
        case UpdateFn::Join:
            return LatticePolynomial::join_of(LatticePolynomial::var(0), LatticePolynomial::var(1));
    }
    throw std::logic_error("update_polynomial: unknown update function");
}

/// Coalition threshold r for aggregating n incoming relations. r = 0 is
/// rejected: it would admit the empty coalition, whose meet is the maximum,
/// and force the aggregate to total indifference.
struct MedianParams {
    int threshold = 1;  // r
    int inputs = 1;     // n

    void validate() const {
        if (inputs < 1) throw std::invalid_argument("median: needs at least one input");
        if (threshold < 1 || threshold > inputs)
            throw std::invalid_argument("median: threshold must satisfy 1 <= r <= " +
                                        std::to_string(inputs) + ", got " +
                                        std::to_string(threshold));
    }
};

namespace detail {

inline int common_dim(std::span<const PreferenceRelation> relations, const char* who) {
    const int dim = relations.front().dim();
    for (const auto& p : relations)
        if (p.dim() != dim) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    return dim;
}

/// Pairs held by at least `threshold` of the inputs.
inline Relation threshold_support(int threshold, std::span<const PreferenceRelation> relations) {
    const int dim = common_dim(relations, "median");
    Relation supported(dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            int votes = 0;
            for (const auto& p : relations) {
                if (p.contains(a, b) && ++votes >= threshold) break;
            }
            if (votes >= threshold) supported.insert(a, b);
        }
    return supported;
}

}  // namespace detail

/// Aggregate by keeping every comparison supported by at least `threshold`
/// inputs, then closing transitively and reflexively. This equals the join
/// over all input subsets of size >= threshold of their meets, which
/// median_bruteforce evaluates literally.
inline PreferenceRelation median(int threshold, std::span<const PreferenceRelation> relations) {
    MedianParams{threshold, static_cast<int>(relations.size())}.validate();
    return transitive_reflexive_closure(detail::threshold_support(threshold, relations));
}

/// Reference evaluation of the subset formula: enumerate every subset of
/// size >= threshold, meet its members, join all the meets. Exponential in
/// the input count, so capped at 12 inputs.
inline PreferenceRelation median_bruteforce(int threshold,
                                            std::span<const PreferenceRelation> relations) {
    const int n = static_cast<int>(relations.size());
    MedianParams{threshold, n}.validate();
    if (n > 12) throw std::length_error("median_bruteforce: capped at 12 inputs");
    const int dim = detail::common_dim(relations, "median_bruteforce");

    Relation union_of_meets(dim);
    for (std::uint32_t subset = 1; subset < (std::uint32_t{1} << n); ++subset) {
        if (std::popcount(subset) < threshold) continue;
        Relation m = Relation::full(dim);
        for (int j = 0; j < n; ++j)
            if ((subset >> j) & 1u) m &= relations[j].relation();
        union_of_meets |= m;
    }
    return transitive_reflexive_closure(union_of_meets);
}

using AggregateFn = std::function<PreferenceRelation(std::span<const PreferenceRelation>)>;

struct AggregationAxiomReport {
    std::size_t anonymity_trials = 0;
    std::size_t anonymity_violations = 0;
    std::size_t unanimity_trials = 0;
    std::size_t unanimity_violations = 0;
    std::size_t chain_trials = 0;
    std::size_t chain_violations = 0;       // result != element at position n-r+1 from the bottom
    std::size_t chain_matches_index_r = 0;  // how often the result also equals the r-th element
    std::string note;

    bool passed() const noexcept {
        return anonymity_violations == 0 && unanimity_violations == 0 && chain_violations == 0;
    }
};

/// Exercise anonymity, unanimity, and chain behavior of an aggregation
/// function on the given tuples. Anonymity applies random permutations to
/// each tuple; unanimity aggregates constant tuples; the chain check builds
/// an ascending chain from each tuple by cumulative joins and expects the
/// aggregate of an n-chain with threshold r to be the element at position
/// n-r+1 counting from the bottom (see report.note).
inline AggregationAxiomReport check_aggregation_axioms(
    const AggregateFn& aggregate, int threshold,
    std::span<const std::vector<PreferenceRelation>> tuples, std::mt19937_64& rng,
    int permutations_per_tuple = 50) {
    AggregationAxiomReport report;
    report.note =
        "on an ascending chain of n inputs the subset-join definition of the r-median "
        "returns the chain element at position n-r+1 from the bottom; the commonly stated "
        "r-middle index (position r) coincides only when the chain is degenerate or 2r = n+1";

    for (const auto& tuple : tuples) {
        const int n = static_cast<int>(tuple.size());
        if (n < 1 || threshold > n) continue;

        const PreferenceRelation base = aggregate(tuple);

        std::vector<PreferenceRelation> shuffled = tuple;
        for (int t = 0; t < permutations_per_tuple; ++t) {
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            ++report.anonymity_trials;
            if (!(aggregate(shuffled) == base)) ++report.anonymity_violations;
        }

        for (const auto& element : tuple) {
            const std::vector<PreferenceRelation> constant(tuple.size(), element);
            ++report.unanimity_trials;
            if (!(aggregate(constant) == element)) ++report.unanimity_violations;
        }

        std::vector<PreferenceRelation> chain;
        chain.reserve(tuple.size());
        chain.push_back(tuple.front());
        for (std::size_t i = 1; i < tuple.size(); ++i) chain.push_back(join(chain.back(), tuple[i]));
        ++report.chain_trials;
        const PreferenceRelation agg = aggregate(chain);
        if (!(agg == chain[n - threshold])) ++report.chain_violations;
        if (agg == chain[threshold - 1]) ++report.chain_matches_index_r;
    }
    return report;
}

/// A chain c0..cl backing the membership of (a,b) in the median, together
/// with, per step, the sorted indices of the inputs holding that step; every
/// coalition has at least `threshold` members.
struct CoalitionChain {
    std::vector<int> alternatives;
    std::vector<std::vector<int>> coalitions;
};

/// Explain why (a,b) belongs to median(threshold, relations): path search in
/// the digraph of pairs with support >= threshold. Returns nullopt exactly
/// when (a,b) is not in the median.
inline std::optional<CoalitionChain> coalition_witness(
    int threshold, std::span<const PreferenceRelation> relations, int a, int b) {
    MedianParams{threshold, static_cast<int>(relations.size())}.validate();
    const Relation supported = detail::threshold_support(threshold, relations);
    const int dim = supported.dim();
    if (a < 0 || a >= dim || b < 0 || b >= dim)
        throw std::out_of_range("coalition_witness: index out of range");
    if (a == b) return CoalitionChain{{a}, {}};

    std::vector<int> parent(dim, -1);
    std::vector<char> seen(dim, 0);
    std::vector<int> queue{a};
    seen[a] = 1;
    for (std::size_t head = 0; head < queue.size() && !seen[b]; ++head) {
        const int u = queue[head];
        supported.for_each_related(u, [&](int v) {
            if (!seen[v]) {
                seen[v] = 1;
                parent[v] = u;
                queue.push_back(v);
            }
        });
    }
    if (!seen[b]) return std::nullopt;

    CoalitionChain chain;
    for (int v = b; v != -1; v = parent[v]) chain.alternatives.push_back(v);
    std::reverse(chain.alternatives.begin(), chain.alternatives.end());
    for (std::size_t m = 0; m + 1 < chain.alternatives.size(); ++m) {
        const int u = chain.alternatives[m];
        const int v = chain.alternatives[m + 1];
        std::vector<int> coalition;
        for (std::size_t j = 0; j < relations.size(); ++j)
            if (relations[j].contains(u, v)) coalition.push_back(static_cast<int>(j));
        chain.coalitions.push_back(std::move(coalition));
    }
    return chain;
}

}  // namespace prefdyn
