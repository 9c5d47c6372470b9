#include "qwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qwalk/certify.hpp"
#include "qwalk/parallel.hpp"

namespace qwalk {

Vertex ListModel::entry(const Graph& g, Vertex v, Count j) const {
    const auto nb = g.neighbors(v);
    if (nb.empty()) throw std::invalid_argument("list of isolated vertex " + std::to_string(v) + " is empty");
    return nb[bounded(counter_bits(seed_, v, j), nb.size())];
}

Vertex ListModel::take(const Graph& g, Vertex v) { return entry(g, v, ++consumed_[v]); }

Distribution::Distribution(std::vector<double> probabilities) : p_(std::move(probabilities)) {
    double total = 0.0;
    for (double x : p_) {
        if (!(x >= 0.0)) throw std::invalid_argument("distribution has a negative or NaN entry");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("distribution does not sum to 1");
}

Distribution Distribution::point_mass(std::size_t n, Vertex v) {
    std::vector<double> p(n, 0.0);
    p.at(v) = 1.0;
    return Distribution(std::move(p));
}

Distribution stationary(const Graph& g) {
    if (g.edge_count() == 0) throw std::invalid_argument("stationary distribution needs at least one edge");
    const double two_e = 2.0 * static_cast<double>(g.edge_count());
    std::vector<double> p(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) p[v] = static_cast<double>(g.degree(v)) / two_e;
    return Distribution(std::move(p));
}

WalkTrace run_walk(const Graph& g, ListModel& model, Vertex start, Count steps) {
    if (model.vertex_count() != g.vertex_count()) throw std::invalid_argument("list model does not match graph");
    if (start >= g.vertex_count()) throw std::invalid_argument("start vertex out of range");
    if (steps > 0 && g.degree(start) == 0) throw std::invalid_argument("walk cannot leave an isolated start vertex");

    WalkTrace trace;
    trace.start = start;
    trace.steps = steps;
    trace.visit_counts.assign(g.vertex_count(), 0);
    trace.sequence.reserve(steps + 1);
    trace.sequence.push_back(start);
    Vertex at = start;
    for (Count i = 0; i < steps; ++i) {
        ++trace.visit_counts[at];
        at = model.take(g, at);
        trace.sequence.push_back(at);
    }
    return trace;
}

EdgeSubgraph walk_subgraph(const WalkTrace& trace) {
    EdgeAccumulator acc(trace.vertex_count());
    for (std::size_t i = 0; i + 1 < trace.sequence.size(); ++i) acc.add(trace.sequence[i], trace.sequence[i + 1]);
    return std::move(acc).finish();
}

Count list_prefix_length(double alpha, std::size_t degree) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
    return static_cast<Count>(std::floor(alpha * static_cast<double>(degree) + 1e-9));
}

EdgeSubgraph list_subgraph(const Graph& g, const ListModel& model, double alpha) {
    if (model.vertex_count() != g.vertex_count()) throw std::invalid_argument("list model does not match graph");
    EdgeAccumulator acc(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (g.degree(v) == 0) continue;
        const Count prefix = list_prefix_length(alpha, g.degree(v));
        for (Count j = 1; j <= prefix; ++j) acc.add(v, model.entry(g, v, j));
    }
    return std::move(acc).finish();
}

bool list_retains_edge(const Graph& g, const ListModel& model, Vertex u, Vertex v, double alpha) {
    if (!g.has_edge(u, v)) throw std::invalid_argument("not an edge of the graph");
    auto named_by = [&](Vertex from, Vertex to) {
        const Count prefix = list_prefix_length(alpha, g.degree(from));
        for (Count j = 1; j <= prefix; ++j)
            if (model.entry(g, from, j) == to) return true;
        return false;
    };
    return named_by(u, v) || named_by(v, u);
}

double retention_probability(const Graph& g, Vertex u, Vertex v, double alpha) {
    if (!g.has_edge(u, v)) throw std::invalid_argument("not an edge of the graph");
    auto miss = [&](Vertex x) {
        const auto d = static_cast<double>(g.degree(x));
        return std::pow(1.0 - 1.0 / d, static_cast<double>(list_prefix_length(alpha, g.degree(x))));
    };
    return 1.0 - miss(u) * miss(v);
}

SandwichBounds sandwich_bounds(const WalkTrace& trace, const Graph& g) {
    if (trace.vertex_count() != g.vertex_count()) throw std::invalid_argument("trace does not match graph");
    SandwichBounds out{std::numeric_limits<double>::infinity(), 0.0};
    bool any = false;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (g.degree(v) == 0) continue;
        const double ratio = static_cast<double>(trace.visit_counts[v]) / static_cast<double>(g.degree(v));
        out.alpha_lo = std::min(out.alpha_lo, ratio);
        out.alpha_hi = std::max(out.alpha_hi, ratio);
        any = true;
    }
    if (!any) out.alpha_lo = 0.0;
    return out;
}

Count default_subsequence_length(std::size_t n) {
    if (n < 2) return 1;
    const double ln = std::log(static_cast<double>(n));
    return std::max<Count>(1, static_cast<Count>(std::llround(ln * ln)));
}

std::vector<std::vector<Count>> subsequence_visit_counts(const WalkTrace& trace, Count subsequence_length) {
    if (subsequence_length == 0) throw std::invalid_argument("subsequence length must be positive");
    if (subsequence_length > trace.steps) throw std::invalid_argument("subsequence length exceeds walk length");
    const Count blocks = trace.steps / subsequence_length;
    std::vector<std::vector<Count>> rows(subsequence_length, std::vector<Count>(trace.vertex_count(), 0));
    for (Count i = 0; i < subsequence_length; ++i) {
        for (Count j = 0; j < blocks; ++j) ++rows[i][trace.sequence[i + j * subsequence_length]];
    }
    return rows;
}

Distribution empirical_step_distribution(const Graph& g, Vertex start, Count step, std::size_t trials, Seed seed,
                                         unsigned workers) {
    if (trials == 0) throw std::invalid_argument("trials must be at least 1");
    if (start >= g.vertex_count()) throw std::invalid_argument("start vertex out of range");
    std::vector<Vertex> landing(trials);
    parallel_for(
        trials,
        [&](std::size_t t) {
            ListModel model(derive_seed(seed, t), g.vertex_count());
            Vertex at = start;
            for (Count i = 0; i < step; ++i) at = model.take(g, at);
            landing[t] = at;
        },
        workers);
    std::vector<Count> hits(g.vertex_count(), 0);
    for (Vertex v : landing) ++hits[v];
    std::vector<double> p(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) p[v] = static_cast<double>(hits[v]) / static_cast<double>(trials);
    return Distribution(std::move(p));
}

double tv_distance(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) throw std::invalid_argument("distributions live on different vertex sets");
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) total += std::abs(p[i] - q[i]);
    return std::min(1.0, 0.5 * total);
}

HitProbability hit_probability_check(const Graph& g, Vertex start, const VertexSet& s, Count step, std::size_t trials,
                                     Seed seed, double eps, unsigned workers) {
    if (step < 2) throw std::invalid_argument("hit probability check needs step >= 2");
    if (s.universe() != g.vertex_count()) throw std::invalid_argument("set does not match graph");
    const DegreeProfile profile = balanced_vertices(g, eps);
    if (!profile.balanced.contains(start)) {
        throw std::invalid_argument("start vertex " + std::to_string(start) + " is not balanced");
    }
    if (s.size() < min_set_size(g.vertex_count(), eps)) throw std::invalid_argument("|S| must be at least eps n");

    const Distribution law = empirical_step_distribution(g, start, step, trials, seed, workers);
    HitProbability out;
    for (Vertex v : s.members()) out.empirical += law[v];
    out.floor = static_cast<double>(s.size()) / static_cast<double>(g.vertex_count()) - 9.0 * std::sqrt(eps) / profile.rho;
    return out;
}

}  // namespace qwalk
