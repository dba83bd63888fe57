#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prefdyn/errors.hpp"

namespace prefdyn {

/// Undirected simple graph on agent indices 0..n-1. Edges are stored once
/// as ordered pairs i < j in lexicographic order; neighbor lists are sorted.
class Graph {
public:
    Graph(int n, std::vector<std::pair<int, int>> edges)
        : n_(n), edges_(std::move(edges)), adjacency_(static_cast<std::size_t>(n)) {
        if (n < 1) throw std::invalid_argument("Graph: need at least one agent");
        for (auto& [i, j] : edges_) {
            if (i > j) std::swap(i, j);
            if (i < 0 || j >= n_) throw std::invalid_argument("Graph: edge endpoint out of range");
            if (i == j) throw std::invalid_argument("Graph: self-loops are not allowed");
        }
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
            throw std::invalid_argument("Graph: duplicate edge");
        for (const auto& [i, j] : edges_) {
            adjacency_[i].push_back(j);
            adjacency_[j].push_back(i);
        }
        for (auto& row : adjacency_) std::sort(row.begin(), row.end());
    }

    int agent_count() const noexcept { return n_; }

    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }

    /// Sorted, duplicate-free, never contains i itself.
    const std::vector<int>& neighbors(int i) const {
        check_index(i);
        return adjacency_[i];
    }

    int degree(int i) const { return static_cast<int>(neighbors(i).size()); }

    bool connected() const {
        std::vector<char> seen(n_, 0);
        std::vector<int> queue{0};
        seen[0] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head)
            for (int v : adjacency_[queue[head]])
                if (!seen[v]) {
                    seen[v] = 1;
                    queue.push_back(v);
                }
        return static_cast<int>(queue.size()) == n_;
    }

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    void check_index(int i) const {
        if (i < 0 || i >= n_) throw std::out_of_range("Graph: agent index out of range");
    }

    int n_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
};

/// Random graph in which every vertex has degree exactly k. Stub pairing:
/// each vertex contributes k stubs, stubs are matched uniformly at random,
/// draws that would create a self-loop or a duplicate edge are rejected,
/// and the whole attempt restarts when the remaining stubs admit no valid
/// pair. Deterministic given the rng stream.
inline Graph random_k_regular(int n, int k, std::mt19937_64& rng, int max_restarts = 10000) {
    if (n < 1) throw std::invalid_argument("random_k_regular: need at least one vertex");
    if (k < 0 || k >= n) throw std::invalid_argument("random_k_regular: need 0 <= k < n");
    if ((static_cast<long long>(n) * k) % 2 != 0)
        throw std::invalid_argument("random_k_regular: n*k must be even");
    if (max_restarts < 1) throw std::invalid_argument("random_k_regular: max_restarts must be >= 1");
    if (k == 0) return Graph(n, {});

    for (int attempt = 1; attempt <= max_restarts; ++attempt) {
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * k);
        for (int v = 0; v < n; ++v)
            for (int c = 0; c < k; ++c) stubs.push_back(v);

        std::vector<std::vector<char>> adjacent(n, std::vector<char>(n, 0));
        std::vector<std::pair<int, int>> edges;
        edges.reserve(static_cast<std::size_t>(n) * k / 2);

        bool stuck = false;
        int consecutive_rejects = 0;
        while (!stubs.empty()) {
            const std::size_t s = stubs.size();
            std::size_t i = std::uniform_int_distribution<std::size_t>(0, s - 1)(rng);
            std::size_t j = std::uniform_int_distribution<std::size_t>(0, s - 2)(rng);
            if (j >= i) ++j;
            const int u = stubs[i];
            const int v = stubs[j];
            if (u != v && !adjacent[u][v]) {
                adjacent[u][v] = adjacent[v][u] = 1;
                edges.emplace_back(std::min(u, v), std::max(u, v));
                if (i < j) std::swap(i, j);
                stubs[i] = stubs.back();
                stubs.pop_back();
                stubs[j] = stubs.back();
                stubs.pop_back();
                consecutive_rejects = 0;
                continue;
            }
            if (++consecutive_rejects > 200) {
                // exhaustive scan: is any valid pair left among the stubs?
                stuck = true;
                for (std::size_t x = 0; x < stubs.size() && stuck; ++x)
                    for (std::size_t y = x + 1; y < stubs.size() && stuck; ++y)
                        if (stubs[x] != stubs[y] && !adjacent[stubs[x]][stubs[y]]) stuck = false;
                if (stuck) break;
                consecutive_rejects = 0;
            }
        }
        if (!stuck) return Graph(n, std::move(edges));
    }
    throw RetryExhaustedError("random_k_regular: restart budget exhausted after " +
                                  std::to_string(max_restarts) + " attempts",
                              max_restarts);
}

struct StoredGraph {
    Graph graph;
    int k = 0;
    std::uint64_t seed = 0;
};

/// Text format: header "n k seed", then one "i j" line per edge with i < j,
/// in lexicographic order.
inline void write_graph(std::ostream& out, const Graph& g, int k, std::uint64_t seed) {
    out << g.agent_count() << ' ' << k << ' ' << seed << '\n';
    for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

inline StoredGraph read_graph(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("read_graph: missing header");
    std::istringstream header(line);
    int n = 0, k = 0;
    std::uint64_t seed = 0;
    if (!(header >> n >> k >> seed)) throw std::invalid_argument("read_graph: bad header");

    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream row(line);
        int i = 0, j = 0;
        if (!(row >> i >> j)) throw std::invalid_argument("read_graph: bad edge line");
        edges.emplace_back(i, j);
    }
    return StoredGraph{Graph(n, std::move(edges)), k, seed};
}

}  // namespace prefdyn
