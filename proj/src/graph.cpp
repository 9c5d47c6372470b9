#include "qwalk/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <string>

namespace qwalk {

namespace {

// Slack for comparisons whose operands are exact in real arithmetic but
// pass through a division (eps = 1/n, alpha = x/d, ...).
constexpr double kRoundingSlack = 1e-9;

}  // namespace

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
    if (n > std::size_t{1} << 31) throw GraphError("vertex count too large");
    std::vector<std::size_t> degree(n, 0);
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n) {
            throw GraphError("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             "} has an endpoint outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
        }
        if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
        ++degree[e.u];
        ++degree[e.v];
    }

    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
    std::vector<Vertex> targets(g.offsets_[n]);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : edges) {
        targets[cursor[e.u]++] = e.v;
        targets[cursor[e.v]++] = e.u;
    }

    // Sort and drop duplicate pairs, compacting in place.
    std::size_t write = 0;
    std::vector<std::size_t> offsets(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
        auto first = targets.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
        auto last = targets.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
        std::sort(first, last);
        last = std::unique(first, last);
        offsets[v] = write;
        for (auto it = first; it != last; ++it) targets[write++] = *it;
    }
    offsets[n] = write;
    targets.resize(write);
    targets.shrink_to_fit();

    g.offsets_ = std::move(offsets);
    g.targets_ = std::move(targets);
    g.edge_count_ = write / 2;
    return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const noexcept {
    if (u >= vertex_count() || v >= vertex_count()) return false;
    if (degree(u) > degree(v)) std::swap(u, v);
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::size_t Graph::min_degree() const noexcept {
    std::size_t best = vertex_count() == 0 ? 0 : degree(0);
    for (Vertex v = 1; v < vertex_count(); ++v) best = std::min(best, degree(v));
    return best;
}

std::size_t Graph::max_degree() const noexcept {
    std::size_t best = 0;
    for (Vertex v = 0; v < vertex_count(); ++v) best = std::max(best, degree(v));
    return best;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < vertex_count(); ++u) {
        for (Vertex v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

VertexSet VertexSet::of(std::size_t universe, std::span<const Vertex> members) {
    VertexSet s(universe);
    for (Vertex v : members) s.insert(v);
    return s;
}

VertexSet VertexSet::full(std::size_t universe) {
    VertexSet s(universe);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    if (universe % 64 != 0 && !s.words_.empty()) s.words_.back() = (std::uint64_t{1} << (universe % 64)) - 1;
    s.size_ = universe;
    return s;
}

VertexSet VertexSet::from_mask(std::size_t universe, std::uint64_t mask) {
    if (universe > 64) throw std::invalid_argument("from_mask needs universe <= 64");
    if (universe < 64 && (mask >> universe) != 0) throw std::invalid_argument("mask has bits outside universe");
    VertexSet s(universe);
    if (!s.words_.empty()) s.words_[0] = mask;
    s.size_ = static_cast<std::size_t>(std::popcount(mask));
    return s;
}

void VertexSet::insert(Vertex v) {
    if (v >= universe_) throw std::out_of_range("vertex " + std::to_string(v) + " outside set universe");
    std::uint64_t& w = words_[v >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (v & 63);
    if ((w & bit) == 0) {
        w |= bit;
        ++size_;
    }
}

void VertexSet::erase(Vertex v) {
    if (v >= universe_) return;
    std::uint64_t& w = words_[v >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (v & 63);
    if ((w & bit) != 0) {
        w &= ~bit;
        --size_;
    }
}

VertexSet VertexSet::complement() const {
    VertexSet out = full(universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= ~words_[i];
    out.size_ = universe_ - size_;
    return out;
}

std::vector<Vertex> VertexSet::members() const {
    std::vector<Vertex> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < words_.size(); ++i) {
        std::uint64_t w = words_[i];
        while (w != 0) {
            out.push_back(static_cast<Vertex>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
            w &= w - 1;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Graph build_graph(std::size_t n, std::span<const Edge> edges) { return Graph::from_edges(n, edges); }

Count edges_between(const Graph& g, const VertexSet& a, const VertexSet& b) {
    if (a.universe() != g.vertex_count() || b.universe() != g.vertex_count()) {
        throw std::invalid_argument("vertex sets must range over the graph's vertices");
    }
    Count total = 0;
    for (Vertex x : a.members()) {
        for (Vertex y : g.neighbors(x)) total += b.contains(y) ? 1 : 0;
    }
    return total;
}

double density(const Graph& g) {
    const std::size_t n = g.vertex_count();
    if (n < 2) throw std::invalid_argument("density needs at least two vertices");
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return static_cast<double>(g.edge_count()) / pairs;
}

DegreeProfile balanced_vertices(const Graph& g, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    const std::size_t n = g.vertex_count();
    DegreeProfile profile;
    profile.rho = density(g);
    profile.epsilon = eps;
    profile.balanced = VertexSet(n);
    const double centre = profile.rho * static_cast<double>(n);
    const double radius = eps * static_cast<double>(n) + kRoundingSlack;
    for (Vertex v = 0; v < n; ++v) {
        if (std::abs(static_cast<double>(g.degree(v)) - centre) <= radius) profile.balanced.insert(v);
    }
    return profile;
}

std::optional<Vertex> lowest_balanced_vertex(const Graph& g, double eps) {
    const auto members = balanced_vertices(g, eps).balanced.members();
    if (members.empty()) return std::nullopt;
    return members.front();
}

bool is_connected(const Graph& g) {
    const std::size_t n = g.vertex_count();
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        for (Vertex w : g.neighbors(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == n;
}

bool is_bipartite(const Graph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<int> colour(n, -1);
    std::queue<Vertex> queue;
    for (Vertex s = 0; s < n; ++s) {
        if (colour[s] != -1) continue;
        colour[s] = 0;
        queue.push(s);
        while (!queue.empty()) {
            const Vertex v = queue.front();
            queue.pop();
            for (Vertex w : g.neighbors(v)) {
                if (colour[w] == -1) {
                    colour[w] = 1 - colour[v];
                    queue.push(w);
                } else if (colour[w] == colour[v]) {
                    return false;
                }
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------

Graph gen_gnp(std::size_t n, double p, Seed seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
    std::vector<Edge> edges;
    if (n >= 2) edges.reserve(static_cast<std::size_t>(p * static_cast<double>(n) * static_cast<double>(n - 1) / 2.0 * 1.01) + 16);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            if (unit_interval(counter_bits(seed, u, v)) < p) edges.emplace_back(u, v);
        }
    }
    return Graph::from_edges(n, edges);
}

Graph gen_complete(std::size_t n) {
    std::vector<Edge> edges;
    if (n >= 2) edges.reserve(n * (n - 1) / 2);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

Graph gen_cycle(std::size_t n) {
    if (n < 3) throw std::invalid_argument("a cycle needs at least three vertices");
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v) edges.emplace_back(v, static_cast<Vertex>((v + 1) % n));
    return Graph::from_edges(n, edges);
}

Graph gen_path(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return Graph::from_edges(n, edges);
}

Graph gen_star(std::size_t leaves) {
    std::vector<Edge> edges;
    for (Vertex v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
    return Graph::from_edges(leaves + 1, edges);
}

Graph gen_complete_bipartite(std::size_t left, std::size_t right) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < left; ++u)
        for (std::size_t j = 0; j < right; ++j) edges.emplace_back(u, static_cast<Vertex>(left + j));
    return Graph::from_edges(left + right, edges);
}

Graph gen_circulant(std::size_t n, std::size_t k) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v) {
        for (std::size_t off = 1; off <= k; ++off) {
            const auto w = static_cast<Vertex>((v + off) % n);
            if (w != v) edges.emplace_back(v, w);
        }
    }
    return Graph::from_edges(n, edges);
}

std::size_t two_clique_small_size(std::size_t n, double eps) {
    const double raw = eps * eps * static_cast<double>(n) / 2.0;
    return static_cast<std::size_t>(std::ceil(raw - kRoundingSlack));
}

Graph gen_two_clique_bridge(std::size_t n, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    const std::size_t s = two_clique_small_size(n, eps);
    if (s < 2) throw std::invalid_argument("small clique would have fewer than two vertices");
    if (n < s + 2) throw std::invalid_argument("large clique would have fewer than two vertices");
    std::vector<Edge> edges;
    edges.reserve(s * (s - 1) / 2 + (n - s) * (n - s - 1) / 2 + 1);
    for (Vertex u = 0; u < s; ++u)
        for (Vertex v = u + 1; v < s; ++v) edges.emplace_back(u, v);
    for (auto u = static_cast<Vertex>(s); u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    edges.emplace_back(0, static_cast<Vertex>(s));
    return Graph::from_edges(n, edges);
}

// ---------------------------------------------------------------------------

EdgeSubgraph::EdgeSubgraph(std::size_t parent_vertices, std::vector<Edge> edges)
    : n_(parent_vertices), edges_(std::move(edges)) {}

bool EdgeSubgraph::contains(Edge e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

bool EdgeSubgraph::is_subset_of(const EdgeSubgraph& other) const {
    return n_ == other.n_ && std::includes(other.edges_.begin(), other.edges_.end(), edges_.begin(), edges_.end());
}

bool EdgeSubgraph::is_subgraph_of(const Graph& g) const {
    if (g.vertex_count() != n_) return false;
    return std::all_of(edges_.begin(), edges_.end(), [&](const Edge& e) { return g.has_edge(e.u, e.v); });
}

Graph EdgeSubgraph::to_graph() const { return Graph::from_edges(n_, edges_); }

EdgeAccumulator::EdgeAccumulator(std::size_t n) : n_(n), dense_(n <= kDenseLimit) {
    if (dense_) bits_.assign((n * n + 63) / 64, 0);
}

void EdgeAccumulator::add(Vertex a, Vertex b) {
    const Edge e(a, b);
    if (dense_) {
        const std::size_t idx = static_cast<std::size_t>(e.u) * n_ + e.v;
        bits_[idx >> 6] |= std::uint64_t{1} << (idx & 63);
    } else {
        list_.push_back(e);
    }
}

EdgeSubgraph EdgeAccumulator::finish() && {
    std::vector<Edge> out;
    if (dense_) {
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            std::uint64_t w = bits_[i];
            while (w != 0) {
                const std::size_t idx = i * 64 + static_cast<std::size_t>(std::countr_zero(w));
                out.emplace_back(static_cast<Vertex>(idx / n_), static_cast<Vertex>(idx % n_));
                w &= w - 1;
            }
        }
    } else {
        out = std::move(list_);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return EdgeSubgraph(n_, std::move(out));
}

}  // namespace qwalk
