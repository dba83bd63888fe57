#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace prefdyn {

/// Finite ground set of alternatives, indexed 0..size()-1.
class AlternativeSet {
public:
    explicit AlternativeSet(int size) : size_(size) {
        if (size < 1) throw std::invalid_argument("AlternativeSet: size must be at least 1");
    }

    int size() const noexcept { return size_; }

    friend bool operator==(const AlternativeSet&, const AlternativeSet&) = default;

private:
    int size_;
};

/// How two relations on the same alternatives compare under set inclusion.
enum class InformationOrder { Less, Equal, Greater, Incomparable };

inline bool is_leq(InformationOrder o) noexcept {
    return o == InformationOrder::Less || o == InformationOrder::Equal;
}

inline bool is_geq(InformationOrder o) noexcept {
    return o == InformationOrder::Greater || o == InformationOrder::Equal;
}

/// Binary relation on {0,...,dim-1} stored as a dense square bit matrix;
/// contains(a, b) is the entry at row a, column b. Rows are packed into
/// 64-bit words and unused tail bits stay zero, so equality is plain word
/// equality. Values are immutable in spirit: every algorithm below builds
/// new relations rather than mutating shared ones.
class Relation {
public:
    explicit Relation(int dim)
        : dim_(checked_dim(dim)),
          words_per_row_((dim + 63) / 64),
          bits_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(words_per_row_), 0) {}

    explicit Relation(const AlternativeSet& alternatives) : Relation(alternatives.size()) {}

    /// The relation {(a,a)}.
    static Relation diagonal(int dim) {
        Relation r(dim);
        for (int a = 0; a < dim; ++a) r.insert(a, a);
        return r;
    }

    /// The relation containing every ordered pair.
    static Relation full(int dim) {
        Relation r(dim);
        for (auto& w : r.bits_) w = ~std::uint64_t{0};
        r.mask_tail();
        return r;
    }

    int dim() const noexcept { return dim_; }

    bool contains(int a, int b) const {
        check_index(a);
        check_index(b);
        return (word(a, b >> 6) >> (b & 63)) & 1u;
    }

    void insert(int a, int b) {
        check_index(a);
        check_index(b);
        word(a, b >> 6) |= std::uint64_t{1} << (b & 63);
    }

    void erase(int a, int b) {
        check_index(a);
        check_index(b);
        word(a, b >> 6) &= ~(std::uint64_t{1} << (b & 63));
    }

    /// Number of pairs present.
    int pair_count() const noexcept {
        int n = 0;
        for (auto w : bits_) n += std::popcount(w);
        return n;
    }

    bool subset_of(const Relation& other) const {
        check_same_dim(other);
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] & ~other.bits_[i]) return false;
        return true;
    }

    Relation transposed() const {
        Relation t(dim_);
        for (int a = 0; a < dim_; ++a)
            for_each_related(a, [&](int b) { t.insert(b, a); });
        return t;
    }

    Relation& operator&=(const Relation& other) {
        check_same_dim(other);
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= other.bits_[i];
        return *this;
    }

    Relation& operator|=(const Relation& other) {
        check_same_dim(other);
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
        return *this;
    }

    friend Relation operator&(Relation lhs, const Relation& rhs) {
        lhs &= rhs;
        return lhs;
    }

    friend Relation operator|(Relation lhs, const Relation& rhs) {
        lhs |= rhs;
        return lhs;
    }

    /// Pairs of this relation that are not in `other`.
    Relation without(const Relation& other) const {
        check_same_dim(other);
        Relation r(*this);
        for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] &= ~other.bits_[i];
        return r;
    }

    friend bool operator==(const Relation&, const Relation&) = default;

    /// row(a) contains row(b): everything b relates to, a relates to as well.
    bool row_includes(int a, int b) const {
        check_index(a);
        check_index(b);
        for (int w = 0; w < words_per_row_; ++w)
            if (word(b, w) & ~word(a, w)) return false;
        return true;
    }

    /// row(dst) |= row(src), within this relation.
    void unite_row(int dst, int src) {
        check_index(dst);
        check_index(src);
        for (int w = 0; w < words_per_row_; ++w) word(dst, w) |= word(src, w);
    }

    /// row(dst) |= other.row(src).
    void unite_row_from(int dst, const Relation& other, int src) {
        check_same_dim(other);
        check_index(dst);
        other.check_index(src);
        for (int w = 0; w < words_per_row_; ++w) word(dst, w) |= other.word(src, w);
    }

    /// Invoke f(b) for every b related from a, in increasing order of b.
    template <class F>
    void for_each_related(int a, F&& f) const {
        check_index(a);
        for (int w = 0; w < words_per_row_; ++w) {
            std::uint64_t bits = word(a, w);
            while (bits) {
                f((w << 6) + std::countr_zero(bits));
                bits &= bits - 1;
            }
        }
    }

    std::vector<int> successors(int a) const {
        std::vector<int> out;
        for_each_related(a, [&](int b) { out.push_back(b); });
        return out;
    }

private:
    static int checked_dim(int dim) {
        if (dim < 1) throw std::invalid_argument("Relation: dim must be at least 1");
        return dim;
    }

    void check_index(int a) const {
        if (a < 0 || a >= dim_) throw std::out_of_range("Relation: index out of range");
    }

    void check_same_dim(const Relation& other) const {
        if (dim_ != other.dim_) throw std::invalid_argument("Relation: dimension mismatch");
    }

    std::uint64_t& word(int row, int w) {
        return bits_[static_cast<std::size_t>(row) * words_per_row_ + w];
    }

    std::uint64_t word(int row, int w) const {
        return bits_[static_cast<std::size_t>(row) * words_per_row_ + w];
    }

    void mask_tail() {
        const int rem = dim_ & 63;
        if (rem == 0) return;
        const std::uint64_t mask = (std::uint64_t{1} << rem) - 1;
        for (int a = 0; a < dim_; ++a) word(a, words_per_row_ - 1) &= mask;
    }

    int dim_;
    int words_per_row_;
    std::vector<std::uint64_t> bits_;
};

inline bool is_reflexive(const Relation& r) {
    for (int a = 0; a < r.dim(); ++a)
        if (!r.contains(a, a)) return false;
    return true;
}

inline bool is_transitive(const Relation& r) {
    for (int a = 0; a < r.dim(); ++a) {
        bool ok = true;
        r.for_each_related(a, [&](int b) {
            if (ok && !r.row_includes(a, b)) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

inline InformationOrder compare(const Relation& r1, const Relation& r2) {
    const bool le = r1.subset_of(r2);
    const bool ge = r2.subset_of(r1);
    if (le && ge) return InformationOrder::Equal;
    if (le) return InformationOrder::Less;
    if (ge) return InformationOrder::Greater;
    return InformationOrder::Incomparable;
}

/// Pairs (a,b) reachable by following `first` and then `second`: there is a
/// c with (a,c) in first and (c,b) in second. Boolean matrix product.
inline Relation compose(const Relation& first, const Relation& second) {
    if (first.dim() != second.dim()) throw std::invalid_argument("compose: dimension mismatch");
    Relation result(first.dim());
    for (int a = 0; a < first.dim(); ++a)
        first.for_each_related(a, [&](int c) { result.unite_row_from(a, second, c); });
    return result;
}

/// Smallest transitive relation containing r: the union of all iterated
/// compositions, computed by an in-place Warshall sweep over bit rows.
inline Relation transitive_closure(const Relation& r) {
    Relation w = r;
    for (int k = 0; k < w.dim(); ++k)
        for (int a = 0; a < w.dim(); ++a)
            if (w.contains(a, k)) w.unite_row(a, k);
    return w;
}

/// Canonical text form: dim lines of dim characters, '1' where the pair
/// (row, column) is present. Row index is the first coordinate.
inline std::string to_text(const Relation& r) {
    std::string out;
    out.reserve(static_cast<std::size_t>(r.dim()) * (r.dim() + 1));
    for (int a = 0; a < r.dim(); ++a) {
        for (int b = 0; b < r.dim(); ++b) out.push_back(r.contains(a, b) ? '1' : '0');
        out.push_back('\n');
    }
    return out;
}

/// Read the next dim non-blank lines as one relation.
inline Relation read_relation(std::istream& in, int dim) {
    Relation r(dim);
    std::string line;
    int row = 0;
    while (row < dim && std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (static_cast<int>(line.size()) != dim)
            throw std::invalid_argument("read_relation: expected " + std::to_string(dim) +
                                        " characters per row, got " + std::to_string(line.size()));
        for (int b = 0; b < dim; ++b) {
            if (line[b] == '1')
                r.insert(row, b);
            else if (line[b] != '0')
                throw std::invalid_argument("read_relation: rows must contain only '0'/'1'");
        }
        ++row;
    }
    if (row != dim) throw std::invalid_argument("read_relation: truncated input");
    return r;
}

inline Relation relation_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int dim = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) ++dim;
    }
    if (dim == 0) throw std::invalid_argument("relation_from_text: no rows");
    in.clear();
    in.seekg(0);
    return read_relation(in, dim);
}

}  // namespace prefdyn
