#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library beyond constructing graphs.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "qwalk/graph.hpp"

namespace qwalk::testing {

using Matrix = std::vector<std::vector<int>>;

inline Matrix adjacency(const Graph& g) {
    Matrix a(g.vertex_count(), std::vector<int>(g.vertex_count(), 0));
    for (const Edge& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = 1;
    return a;
}

/// Erdos-Renyi graph drawn with std::mt19937_64, for oracle comparisons.
inline Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (coin(rng)) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

/// Random graph with no isolated vertex: a random spanning path plus extras.
inline Graph random_graph_min_degree_one(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vertex> order(n);
    for (Vertex v = 0; v < n; ++v) order[v] = v;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(order[i], order[i + 1]);
    std::bernoulli_distribution coin(p);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (coin(rng)) edges.emplace_back(u, v);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph::from_edges(n, edges);
}

/// Ordered-pair edge count straight from the adjacency matrix.
inline std::uint64_t edge_count_between(const Matrix& a, std::uint64_t mask_a, std::uint64_t mask_b) {
    std::uint64_t total = 0;
    for (std::size_t x = 0; x < a.size(); ++x) {
        if (!((mask_a >> x) & 1U)) continue;
        for (std::size_t y = 0; y < a.size(); ++y)
            if (((mask_b >> y) & 1U) && a[x][y]) ++total;
    }
    return total;
}

}  // namespace qwalk::testing
