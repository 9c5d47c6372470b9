#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwalk/random.hpp"

namespace qwalk {

using Vertex = std::uint32_t;
using Count = std::uint64_t;

/// Raised when a graph, tree or file violates its structural contract.
class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Undirected edge, normalized so that u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    Edge() = default;
    Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

    auto operator<=>(const Edge&) const = default;
};

/// Immutable simple undirected graph in compressed adjacency form.
/// Neighbor lists are sorted, which gives O(log d) adjacency tests and
/// linear-time common-neighborhood intersection.
class Graph {
public:
    Graph() = default;

    /// Builds a graph from unordered pairs. Duplicates collapse; self-loops
    /// and out-of-range endpoints throw GraphError.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges);

    std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    Count edge_count() const noexcept { return edge_count_; }

    std::span<const Vertex> neighbors(Vertex v) const noexcept {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(Vertex u, Vertex v) const noexcept;

    std::size_t min_degree() const noexcept;
    std::size_t max_degree() const noexcept;

    /// All edges with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    bool operator==(const Graph&) const = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> targets_;
    Count edge_count_ = 0;
};

/// Membership over {0, ..., n-1} with bitset storage.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

    static VertexSet of(std::size_t universe, std::span<const Vertex> members);
    static VertexSet full(std::size_t universe);
    /// Members are the set bits of mask (universe <= 64).
    static VertexSet from_mask(std::size_t universe, std::uint64_t mask);

    std::size_t universe() const noexcept { return universe_; }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    bool contains(Vertex v) const noexcept {
        return v < universe_ && ((words_[v >> 6] >> (v & 63)) & 1U) != 0;
    }
    void insert(Vertex v);
    void erase(Vertex v);

    VertexSet complement() const;
    std::vector<Vertex> members() const;
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    bool operator==(const VertexSet&) const = default;

private:
    std::size_t universe_ = 0;
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct DegreeProfile {
    double rho = 0.0;
    VertexSet balanced;
    double epsilon = 0.0;
};

Graph build_graph(std::size_t n, std::span<const Edge> edges);

/// e_G(A, B): ordered pairs (a, b) in A x B with ab an edge. An edge with
/// both endpoints in A ∩ B contributes 2.
Count edges_between(const Graph& g, const VertexSet& a, const VertexSet& b);

/// e(G) / C(n, 2). Requires n >= 2.
double density(const Graph& g);

/// Vertices with |d(v) - rho n| <= eps n.
DegreeProfile balanced_vertices(const Graph& g, double eps);

/// Lowest-id balanced vertex, if any.
std::optional<Vertex> lowest_balanced_vertex(const Graph& g, double eps);

bool is_connected(const Graph& g);
bool is_bipartite(const Graph& g);

// Generators. All are pure functions of their arguments.
Graph gen_gnp(std::size_t n, double p, Seed seed);
Graph gen_complete(std::size_t n);
Graph gen_cycle(std::size_t n);
Graph gen_path(std::size_t n);
Graph gen_star(std::size_t leaves);
Graph gen_complete_bipartite(std::size_t left, std::size_t right);
/// Circulant graph with offsets 1..k: 2k-regular when n > 2k.
Graph gen_circulant(std::size_t n, std::size_t k);

/// Size of the small clique in gen_two_clique_bridge: ceil(eps^2 n / 2).
std::size_t two_clique_small_size(std::size_t n, double eps);
/// Small clique on 0..s-1, large clique on s..n-1, bridge {0, s}.
Graph gen_two_clique_bridge(std::size_t n, double eps);

/// Set of edges of a parent graph (G_W, G_L(alpha), G_T).
class EdgeSubgraph {
public:
    EdgeSubgraph() = default;
    /// edges must be sorted and unique.
    EdgeSubgraph(std::size_t parent_vertices, std::vector<Edge> edges);

    std::size_t parent_vertices() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return edges_.size(); }

    bool contains(Edge e) const;
    bool is_subset_of(const EdgeSubgraph& other) const;
    bool is_subgraph_of(const Graph& g) const;
    Graph to_graph() const;

    bool operator==(const EdgeSubgraph&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
};

/// Deduplicating edge collector; dense bitset for moderate n, sort+unique beyond.
class EdgeAccumulator {
public:
    explicit EdgeAccumulator(std::size_t n);

    void add(Vertex a, Vertex b);
    EdgeSubgraph finish() &&;

private:
    static constexpr std::size_t kDenseLimit = 8192;

    std::size_t n_;
    bool dense_;
    std::vector<std::uint64_t> bits_;
    std::vector<Edge> list_;
};

}  // namespace qwalk
