#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/random.hpp"

namespace qwalk {

/// Per-vertex infinite lists L_v of independent uniform neighbour choices.
///
/// Entries are never stored: entry(v, j) is recomputed from (seed, v, j), so
/// any number of walks, tree embeddings and list subgraphs can replay the
/// same lists. The consumption counters are the only mutable state; walks and
/// homomorphisms advance them, list_subgraph ignores them.
class ListModel {
public:
    ListModel(Seed seed, std::size_t vertex_count) : seed_(seed), consumed_(vertex_count, 0) {}

    Seed seed() const noexcept { return seed_; }
    std::size_t vertex_count() const noexcept { return consumed_.size(); }

    /// The j-th entry (j >= 1) of L_v. Throws if v is isolated.
    Vertex entry(const Graph& g, Vertex v, Count j) const;

    /// Returns the next unused entry of L_v and marks it used.
    Vertex take(const Graph& g, Vertex v);

    Count consumed(Vertex v) const noexcept { return consumed_[v]; }
    std::span<const Count> consumed_counts() const noexcept { return consumed_; }

private:
    Seed seed_;
    std::vector<Count> consumed_;
};

struct WalkTrace {
    Vertex start = 0;
    Count steps = 0;
    /// W_0 ... W_steps.
    std::vector<Vertex> sequence;
    /// X_v = |{i in [0, steps) : W_i = v}| (departures; W_steps is not counted).
    std::vector<Count> visit_counts;

    std::size_t vertex_count() const noexcept { return visit_counts.size(); }
};

/// Probability vector over V(G).
class Distribution {
public:
    Distribution() = default;
    /// Validates non-negativity and normalization (within 1e-12).
    explicit Distribution(std::vector<double> probabilities);

    static Distribution point_mass(std::size_t n, Vertex v);

    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const noexcept { return p_[i]; }
    const std::vector<double>& probabilities() const noexcept { return p_; }

private:
    std::vector<double> p_;
};

/// pi_v = d(v) / 2e(G).
Distribution stationary(const Graph& g);

/// Runs W_0 = start, W_{i+1} = next unused entry of L_{W_i}.
WalkTrace run_walk(const Graph& g, ListModel& model, Vertex start, Count steps);

/// Deduplicated edges W_i W_{i+1}.
EdgeSubgraph walk_subgraph(const WalkTrace& trace);

/// Number of list entries floor(alpha d) that define G_L(alpha) at a vertex
/// of degree d. A 1e-9 slack keeps alpha = x / d from flooring to x - 1.
Count list_prefix_length(double alpha, std::size_t degree);

/// G_L(alpha): uv kept iff u is among the first floor(alpha d(v)) entries of
/// L_v or v among the first floor(alpha d(u)) entries of L_u. Replays the
/// model's lists from its seed; consumption counters are ignored.
EdgeSubgraph list_subgraph(const Graph& g, const ListModel& model, double alpha);

/// Membership of a single edge in G_L(alpha), without building the subgraph.
bool list_retains_edge(const Graph& g, const ListModel& model, Vertex u, Vertex v, double alpha);

/// Closed form Pr[uv in G_L(alpha)] =
/// 1 - (1 - 1/d(u))^floor(alpha d(u)) (1 - 1/d(v))^floor(alpha d(v)).
double retention_probability(const Graph& g, Vertex u, Vertex v, double alpha);

struct SandwichBounds {
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
};

/// alpha_lo = min X_v / d(v), alpha_hi = max X_v / d(v) over non-isolated v.
/// With the same ListModel seed, G_L(alpha_lo) ⊆ G_W ⊆ G_L(alpha_hi) exactly.
SandwichBounds sandwich_bounds(const WalkTrace& trace, const Graph& g);

/// round((ln n)^2), at least 1.
Count default_subsequence_length(std::size_t n);

/// Row i (0 <= i < L) counts visits of the subsequence W_i, W_{i+L}, ...,
/// W_{i+(K-1)L} with K = steps / L. Each row sums to K; summing rows gives
/// X_v minus the steps - K L trailing departures.
std::vector<std::vector<Count>> subsequence_visit_counts(const WalkTrace& trace, Count subsequence_length);

/// Monte-Carlo law of W_step from `start` over independent list models
/// seeded derive_seed(seed, t).
Distribution empirical_step_distribution(const Graph& g, Vertex start, Count step, std::size_t trials, Seed seed,
                                         unsigned workers = 0);

/// d_TV(p, q) = 1/2 sum |p_v - q_v|.
double tv_distance(const Distribution& p, const Distribution& q);

struct HitProbability {
    double empirical = 0.0;
    /// |S| / n - 9 sqrt(eps) / rho.
    double floor = 0.0;
};

/// Estimates Pr(W_step in S) from a balanced start and the lower bound it is
/// predicted to respect. Rejects unbalanced starts, |S| < eps n and step < 2.
HitProbability hit_probability_check(const Graph& g, Vertex start, const VertexSet& s, Count step, std::size_t trials,
                                     Seed seed, double eps, unsigned workers = 0);

}  // namespace qwalk
