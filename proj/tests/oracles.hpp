#pragma once

// Independent oracles the implementation is checked against: plain BFS and
// Dijkstra over the unit-disk graph, a naive distance summation, and a
// literal transcription of the table-update rule. These stay free of the
// library's routing and sim code paths on purpose.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "manet/geometry.hpp"
#include "manet/rng.hpp"
#include "manet/types.hpp"

namespace oracle {

using namespace manet;

inline double naive_distance(const geometry::Position& p, const geometry::Position& q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
        double d = p.coords[i] - q.coords[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

// Adjacency of the unit-disk graph over fixed positions.
inline std::vector<std::vector<std::size_t>> udg_adjacency(
    const std::vector<geometry::Position>& pos, double range) {
    std::vector<std::vector<std::size_t>> adj(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        for (std::size_t j = i + 1; j < pos.size(); ++j) {
            if (naive_distance(pos[i], pos[j]) <= range) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    }
    return adj;
}

inline std::vector<int> bfs_hops(const std::vector<std::vector<std::size_t>>& adj,
                                 std::size_t src) {
    std::vector<int> dist(adj.size(), -1);
    std::queue<std::size_t> frontier;
    dist[src] = 0;
    frontier.push(src);
    while (!frontier.empty()) {
        std::size_t u = frontier.front();
        frontier.pop();
        for (std::size_t v : adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                frontier.push(v);
            }
        }
    }
    return dist;
}

inline bool connected(const std::vector<std::vector<std::size_t>>& adj) {
    if (adj.empty()) return true;
    std::vector<int> dist = bfs_hops(adj, 0);
    for (int d : dist) {
        if (d < 0) return false;
    }
    return true;
}

// Dijkstra over per-link weights produced by `weight(i, j)`.
template <typename WeightFn>
std::vector<std::uint64_t> dijkstra(const std::vector<std::vector<std::size_t>>& adj,
                                    std::size_t src, WeightFn weight) {
    constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> dist(adj.size(), kInf);
    using Item = std::pair<std::uint64_t, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[src] = 0;
    heap.emplace(0, src);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (std::size_t v : adj[u]) {
            std::uint64_t nd = d + weight(u, v);
            if (nd < dist[v]) {
                dist[v] = nd;
                heap.emplace(nd, v);
            }
        }
    }
    return dist;
}

// Literal transcription of the four-clause update rule: accept if (a) no
// valid entry, (b) stored number unknown, (c) candidate strictly newer, or
// (d) equal numbers and strictly better metric (fewer hops under baseline,
// lower cost + lambda*hops under the variant).
struct UpdateCell {
    bool entry_valid = false;
    std::optional<std::uint32_t> entry_seq;
    std::uint32_t entry_hops = 0;
    std::uint64_t entry_cost = 0;
    std::optional<std::uint32_t> cand_seq;
    std::uint32_t cand_hops = 0;
    std::uint64_t cand_cost = 0;
};

inline bool update_accept_oracle(const UpdateCell& c, bool variant,
                                 std::uint64_t lambda_hop) {
    if (!c.entry_valid) return true;                                   // (a)
    if (!c.entry_seq.has_value()) return true;                         // (b)
    if (!c.cand_seq.has_value()) return false;
    if (*c.cand_seq > *c.entry_seq) return true;                       // (c)
    if (*c.cand_seq < *c.entry_seq) return false;
    if (variant) {                                                     // (d)
        return c.cand_cost + lambda_hop * c.cand_hops <
               c.entry_cost + lambda_hop * c.entry_hops;
    }
    return c.cand_hops < c.entry_hops;
}

// Connected random unit-disk graph: draws positions until the graph hangs
// together. Deterministic per rng state.
inline std::vector<geometry::Position> connected_udg(Rng& rng, std::size_t n,
                                                     double arena, double range) {
    for (;;) {
        std::vector<geometry::Position> pos;
        pos.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            pos.push_back(geometry::make_xy(rng.uniform(0.0, arena),
                                            rng.uniform(0.0, arena)));
        }
        if (connected(udg_adjacency(pos, range))) {
            return pos;
        }
    }
}

} // namespace oracle
