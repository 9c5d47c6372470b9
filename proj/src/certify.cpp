#include "qwalk/certify.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <vector>

#include "qwalk/parallel.hpp"

namespace qwalk {

namespace {

constexpr double kRoundingSlack = 1e-9;
constexpr std::size_t kDenseRowLimit = 16384;

// Adjacency rows as bitsets, for fast |N(v) ∩ X| via popcount.
class BitRows {
public:
    BitRows(const Graph& g) : n_(g.vertex_count()), words_((n_ + 63) / 64), bits_(n_ * words_, 0) {
        for (Vertex v = 0; v < n_; ++v) {
            std::uint64_t* row = bits_.data() + v * words_;
            for (Vertex w : g.neighbors(v)) row[w >> 6] |= std::uint64_t{1} << (w & 63);
        }
    }

    std::size_t words() const noexcept { return words_; }

    std::size_t common(Vertex v, const std::vector<std::uint64_t>& set) const noexcept {
        const std::uint64_t* row = bits_.data() + v * words_;
        std::size_t total = 0;
        for (std::size_t i = 0; i < words_; ++i) total += static_cast<std::size_t>(std::popcount(row[i] & set[i]));
        return total;
    }

private:
    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

inline void set_bit(std::vector<std::uint64_t>& bits, Vertex v) { bits[v >> 6] |= std::uint64_t{1} << (v & 63); }
inline bool test_bit(const std::vector<std::uint64_t>& bits, Vertex v) { return ((bits[v >> 6] >> (v & 63)) & 1U) != 0; }

struct PairCandidate {
    double deviation = -1.0;
    std::vector<Vertex> a;
    std::vector<Vertex> b;
};

// Random-pair search with optional alternating best responses.
class PairSearch {
public:
    PairSearch(const Graph& g, double rho, std::size_t k)
        : g_(g), n_(g.vertex_count()), rho_(rho), k_(k) {
        if (n_ <= kDenseRowLimit) rows_.emplace(g);
    }

    PairCandidate run_trial(Seed trial_seed, unsigned rounds) const {
        SplitMix64 rng(trial_seed);
        std::vector<Vertex> perm(n_);
        std::iota(perm.begin(), perm.end(), Vertex{0});
        const std::size_t a = k_ + rng.below(n_ - k_ + 1);
        const std::size_t b = k_ + rng.below(n_ - k_ + 1);
        std::vector<Vertex> set_a = draw_subset(perm, a, rng);
        std::vector<Vertex> set_b = draw_subset(perm, b, rng);

        PairCandidate best;
        best.deviation = pair_deviation(edges(set_a, set_b), a, b, rho_);
        best.a = set_a;
        best.b = set_b;

        for (unsigned r = 0; r < rounds; ++r) {
            auto [dev_b, reply_b] = best_response(set_a);
            set_b = std::move(reply_b);
            if (dev_b > best.deviation) {
                best.deviation = dev_b;
                best.a = set_a;
                best.b = set_b;
            }
            auto [dev_a, reply_a] = best_response(set_b);
            set_a = std::move(reply_a);
            if (dev_a > best.deviation) {
                best.deviation = dev_a;
                best.a = set_a;
                best.b = set_b;
            }
        }
        return best;
    }

private:
    std::vector<Vertex> draw_subset(std::vector<Vertex>& perm, std::size_t size, SplitMix64& rng) const {
        for (std::size_t i = 0; i < size; ++i) {
            const std::size_t j = i + rng.below(n_ - i);
            std::swap(perm[i], perm[j]);
        }
        std::vector<Vertex> out(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(size));
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<std::uint64_t> to_bits(const std::vector<Vertex>& set) const {
        std::vector<std::uint64_t> bits((n_ + 63) / 64, 0);
        for (Vertex v : set) set_bit(bits, v);
        return bits;
    }

    Count edges(const std::vector<Vertex>& set_a, const std::vector<Vertex>& set_b) const {
        const auto bits_b = to_bits(set_b);
        Count total = 0;
        for (Vertex x : set_a) {
            if (rows_) {
                total += rows_->common(x, bits_b);
            } else {
                for (Vertex y : g_.neighbors(x)) total += test_bit(bits_b, y) ? 1 : 0;
            }
        }
        return total;
    }

    // Best partner Y for fixed X over every admissible |Y|: for a fixed size
    // the extremes of e(X, Y) come from the vertices with the fewest or the
    // most neighbours in X.
    std::pair<double, std::vector<Vertex>> best_response(const std::vector<Vertex>& set_x) const {
        std::vector<Count> hits(n_, 0);
        if (rows_) {
            const auto bits_x = to_bits(set_x);
            for (Vertex w = 0; w < n_; ++w) hits[w] = rows_->common(w, bits_x);
        } else {
            for (Vertex x : set_x)
                for (Vertex y : g_.neighbors(x)) ++hits[y];
        }
        std::vector<Vertex> order(n_);
        std::iota(order.begin(), order.end(), Vertex{0});
        std::stable_sort(order.begin(), order.end(), [&](Vertex l, Vertex r) { return hits[l] < hits[r]; });
        std::vector<Count> prefix(n_ + 1, 0);
        for (std::size_t i = 0; i < n_; ++i) prefix[i + 1] = prefix[i] + hits[order[i]];

        double best = -1.0;
        std::size_t best_size = k_;
        bool take_low = true;
        for (std::size_t size = k_; size <= n_; ++size) {
            const double low = pair_deviation(prefix[size], set_x.size(), size, rho_);
            const double high = pair_deviation(prefix[n_] - prefix[n_ - size], set_x.size(), size, rho_);
            if (low > best) {
                best = low;
                best_size = size;
                take_low = true;
            }
            if (high > best) {
                best = high;
                best_size = size;
                take_low = false;
            }
        }
        std::vector<Vertex> reply = take_low ? std::vector<Vertex>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_size))
                                             : std::vector<Vertex>(order.end() - static_cast<std::ptrdiff_t>(best_size), order.end());
        std::sort(reply.begin(), reply.end());
        return {best, std::move(reply)};
    }

    const Graph& g_;
    std::size_t n_;
    double rho_;
    std::size_t k_;
    std::optional<BitRows> rows_;
};

std::vector<std::uint64_t> adjacency_masks(const Graph& g) {
    std::vector<std::uint64_t> masks(g.vertex_count(), 0);
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        for (Vertex w : g.neighbors(v)) masks[v] |= std::uint64_t{1} << w;
    return masks;
}

// Every admissible pair, one at a time (n <= 63 and a budget that covers them).
DiscrepancyResult enumerate_all_pairs(const Graph& g, double rho, std::size_t k, Count total_pairs) {
    const std::size_t n = g.vertex_count();
    const auto masks = adjacency_masks(g);
    const std::uint64_t limit = n == 64 ? 0 : (std::uint64_t{1} << n);
    double best = -1.0;
    std::uint64_t best_a = 0;
    std::uint64_t best_b = 0;
    for (std::uint64_t a = 1; a < limit; ++a) {
        const auto size_a = static_cast<std::size_t>(std::popcount(a));
        if (size_a < k) continue;
        for (std::uint64_t b = 1; b < limit; ++b) {
            const auto size_b = static_cast<std::size_t>(std::popcount(b));
            if (size_b < k) continue;
            Count e = 0;
            for (std::uint64_t rest = a; rest != 0; rest &= rest - 1) {
                e += static_cast<Count>(std::popcount(masks[static_cast<std::size_t>(std::countr_zero(rest))] & b));
            }
            const double dev = pair_deviation(e, size_a, size_b, rho);
            if (dev > best) {
                best = dev;
                best_a = a;
                best_b = b;
            }
        }
    }
    DiscrepancyResult out;
    out.deviation = best;
    out.a = VertexSet::from_mask(n, best_a);
    out.b = VertexSet::from_mask(n, best_b);
    out.pairs_checked = total_pairs;
    out.method = DiscrepancyMethod::sampled;
    return out;
}

}  // namespace

std::size_t min_set_size(std::size_t n, double eps) {
    const double raw = eps * static_cast<double>(n);
    if (!(eps > 0.0) || raw < 1.0 - kRoundingSlack) throw std::invalid_argument("eps * n must be at least 1");
    const auto k = static_cast<std::size_t>(std::ceil(raw - kRoundingSlack));
    if (k > n) throw std::invalid_argument("eps must not exceed 1");
    return k;
}

std::string to_string(DiscrepancyMethod m) { return m == DiscrepancyMethod::exhaustive ? "exhaustive" : "sampled"; }

std::optional<Count> admissible_pair_count(std::size_t n, double eps) {
    const std::size_t k = min_set_size(n, eps);
    if (n > 126) return std::nullopt;
    detail::uint128 side = 0;
    detail::uint128 binom = 1;  // C(n, s)
    for (std::size_t s = 0; s <= n; ++s) {
        if (s >= k) side += binom;
        binom = binom * (n - s) / (s + 1);
    }
    if (side > 3037000499ULL) return std::nullopt;
    return static_cast<Count>(side * side);
}

DiscrepancyResult discrepancy_exhaustive(const Graph& g, double eps) {
    const std::size_t n = g.vertex_count();
    if (n > kExhaustiveLimit) {
        throw std::invalid_argument("exhaustive discrepancy refuses n = " + std::to_string(n) + " > " +
                                    std::to_string(kExhaustiveLimit) + "; use the sampled estimator");
    }
    const std::size_t k = min_set_size(n, eps);
    const double rho = density(g);
    const auto masks = adjacency_masks(g);

    double best = -1.0;
    std::uint64_t best_a = 0;
    std::vector<Vertex> best_b;

    std::vector<std::size_t> hits(n);
    std::vector<Vertex> order(n);
    std::vector<Count> prefix(n + 1);
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t a = 1; a < limit; ++a) {
        const auto size_a = static_cast<std::size_t>(std::popcount(a));
        if (size_a < k) continue;
        for (Vertex w = 0; w < n; ++w) hits[w] = static_cast<std::size_t>(std::popcount(masks[w] & a));
        std::iota(order.begin(), order.end(), Vertex{0});
        std::stable_sort(order.begin(), order.end(), [&](Vertex l, Vertex r) { return hits[l] < hits[r]; });
        prefix[0] = 0;
        for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + hits[order[i]];

        for (std::size_t size = k; size <= n; ++size) {
            const double low = pair_deviation(prefix[size], size_a, size, rho);
            const double high = pair_deviation(prefix[n] - prefix[n - size], size_a, size, rho);
            if (low > best) {
                best = low;
                best_a = a;
                best_b.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
            }
            if (high > best) {
                best = high;
                best_a = a;
                best_b.assign(order.end() - static_cast<std::ptrdiff_t>(size), order.end());
            }
        }
    }

    DiscrepancyResult out;
    out.deviation = best;
    out.a = VertexSet::from_mask(n, best_a);
    out.b = VertexSet::of(n, best_b);
    out.pairs_checked = admissible_pair_count(n, eps).value_or(0);
    out.method = DiscrepancyMethod::exhaustive;
    return out;
}

DiscrepancyResult discrepancy_sampled(const Graph& g, double eps, const SampledDiscrepancyOptions& options) {
    if (options.trials == 0) throw std::invalid_argument("trials must be at least 1");
    const std::size_t n = g.vertex_count();
    const std::size_t k = min_set_size(n, eps);
    const double rho = density(g);

    if (n <= 63) {
        const auto total = admissible_pair_count(n, eps);
        if (total && *total <= options.trials) return enumerate_all_pairs(g, rho, k, *total);
    }

    const PairSearch search(g, rho, k);
    std::vector<double> deviations(options.trials);
    parallel_for(
        options.trials,
        [&](std::size_t t) { deviations[t] = search.run_trial(derive_seed(options.seed, t), options.refine_rounds).deviation; },
        options.workers);

    // Replay the winning trial (first index on ties) to recover its witness.
    const auto winner = static_cast<std::size_t>(std::max_element(deviations.begin(), deviations.end()) - deviations.begin());
    const PairCandidate best = search.run_trial(derive_seed(options.seed, winner), options.refine_rounds);

    DiscrepancyResult out;
    out.deviation = best.deviation;
    out.a = VertexSet::of(n, best.a);
    out.b = VertexSet::of(n, best.b);
    out.pairs_checked = static_cast<Count>(options.trials) * (1 + 2 * static_cast<Count>(options.refine_rounds));
    out.method = DiscrepancyMethod::sampled;
    return out;
}

Count count_c4_labelled(const Graph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<Count> codegree(n, 0);
    std::vector<Vertex> touched;
    Count total = 0;
    for (Vertex u = 0; u < n; ++u) {
        touched.clear();
        for (Vertex w : g.neighbors(u)) {
            for (Vertex v : g.neighbors(w)) {
                if (v == u) continue;
                if (codegree[v]++ == 0) touched.push_back(v);
            }
        }
        for (Vertex v : touched) {
            total += codegree[v] * (codegree[v] - 1) / 2;
            codegree[v] = 0;
        }
    }
    return 2 * total;
}

double trace_p4(const Graph& g) {
    const std::size_t n = g.vertex_count();
    if (n == 0) throw std::invalid_argument("trace_p4 of the empty graph");
    if (g.min_degree() == 0) throw std::invalid_argument("trace_p4 needs minimum degree >= 1");

    // Row u of P^2 is accumulated densely; (P^2)_vu = (P^2)_uv d(u) / d(v)
    // by reversibility, so the trace only needs rows.
    std::vector<double> row(n, 0.0);
    std::vector<char> seen(n, 0);
    std::vector<Vertex> touched;
    double trace = 0.0;
    for (Vertex u = 0; u < n; ++u) {
        touched.clear();
        const double du = static_cast<double>(g.degree(u));
        for (Vertex w : g.neighbors(u)) {
            const double step = 1.0 / (du * static_cast<double>(g.degree(w)));
            for (Vertex v : g.neighbors(w)) {
                if (!seen[v]) {
                    seen[v] = 1;
                    touched.push_back(v);
                }
                row[v] += step;
            }
        }
        double acc = 0.0;
        for (Vertex v : touched) {
            acc += row[v] * row[v] * du / static_cast<double>(g.degree(v));
            row[v] = 0.0;
            seen[v] = 0;
        }
        trace += acc;
    }
    return trace;
}

LambdaBound lambda_bound_from_trace(const Graph& g) {
    LambdaBound out;
    out.connected = is_connected(g);
    out.bipartite = is_bipartite(g);
    if (!out.connected || out.bipartite || g.vertex_count() < 2) {
        out.value = 1.0;
        out.certified = false;
        return out;
    }
    const double excess = std::max(trace_p4(g) - 1.0, 0.0);
    out.value = std::min(std::pow(excess, 0.25), 1.0);
    out.certified = true;
    return out;
}

double lambda_estimate(const Graph& g, double tol, std::size_t max_iter) {
    const std::size_t n = g.vertex_count();
    if (n < 2) throw std::invalid_argument("lambda_estimate needs at least two vertices");
    if (!is_connected(g)) throw std::invalid_argument("lambda_estimate needs a connected graph");
    if (is_bipartite(g)) throw std::invalid_argument("lambda_estimate needs a non-bipartite graph");

    std::vector<double> inv_sqrt_d(n);
    std::vector<double> top(n);
    double top_norm = 0.0;
    for (Vertex v = 0; v < n; ++v) {
        const double d = static_cast<double>(g.degree(v));
        inv_sqrt_d[v] = 1.0 / std::sqrt(d);
        top[v] = std::sqrt(d);
        top_norm += d;
    }
    top_norm = std::sqrt(top_norm);
    for (double& t : top) t /= top_norm;

    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (Vertex v = 0; v < n; ++v) {
            double acc = 0.0;
            for (Vertex w : g.neighbors(v)) acc += inv_sqrt_d[w] * x[w];
            y[v] = inv_sqrt_d[v] * acc;
        }
    };
    auto deflate = [&](std::vector<double>& x) {
        const double c = std::inner_product(x.begin(), x.end(), top.begin(), 0.0);
        for (std::size_t i = 0; i < n; ++i) x[i] -= c * top[i];
    };
    auto norm = [](const std::vector<double>& x) { return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0)); };

    std::vector<double> x(n);
    for (Vertex v = 0; v < n; ++v) x[v] = unit_interval(counter_bits(0x1a3bdaULL, v, 0)) - 0.5;
    deflate(x);
    double xn = norm(x);
    if (xn == 0.0) return 0.0;
    for (double& xi : x) xi /= xn;

    std::vector<double> y(n);
    std::vector<double> z(n);
    double estimate = 0.0;
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        apply(x, y);
        const double mu = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
        apply(y, z);
        deflate(z);
        estimate = std::sqrt(mu);
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) residual += (z[i] - mu * x[i]) * (z[i] - mu * x[i]);
        residual = std::sqrt(residual);
        if (residual <= std::max(2.0 * estimate * tol, tol * tol)) return estimate;
        const double zn = norm(z);
        if (zn == 0.0) return 0.0;
        for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / zn;
    }
    throw ConvergenceError("lambda_estimate did not converge in " + std::to_string(max_iter) + " iterations", estimate,
                           max_iter);
}

QuasirandomnessReport certify(const Graph& g, const CertifyOptions& options) {
    QuasirandomnessReport report;
    report.rho = density(g);
    report.eps_target = options.eps;

    const DiscrepancyResult disc =
        options.exhaustive
            ? discrepancy_exhaustive(g, options.eps)
            : discrepancy_sampled(g, options.eps,
                                  {options.trials, options.seed, options.refine_rounds, options.workers});
    report.discrepancy = disc.deviation;
    report.method = disc.method;
    report.pairs_checked = disc.pairs_checked;
    report.c4_labelled = count_c4_labelled(g);
    if (g.min_degree() >= 1) report.trace_p4 = trace_p4(g);

    const LambdaBound bound = lambda_bound_from_trace(g);
    report.lambda_bound = bound.value;
    report.connected = bound.connected;
    report.bipartite = bound.bipartite;
    if (options.estimate_lambda && bound.certified) {
        try {
            report.lambda_estimate = lambda_estimate(g, options.lambda_tol, options.lambda_max_iter);
        } catch (const ConvergenceError&) {
            report.lambda_estimate.reset();
        }
    }
    return report;
}

}  // namespace qwalk
