#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "qwalk/graph.hpp"

namespace qwalk {

/// Normalized deviation |e - rho a b| / (a b) of one set pair. Every
/// discrepancy route goes through this function so equal inputs give
/// bit-identical outputs.
inline double pair_deviation(Count e, std::size_t a, std::size_t b, double rho) noexcept {
    const double area = static_cast<double>(a) * static_cast<double>(b);
    return std::abs(static_cast<double>(e) - rho * area) / area;
}

/// Smallest admissible set size ceil(eps n).
std::size_t min_set_size(std::size_t n, double eps);

enum class DiscrepancyMethod { exhaustive, sampled };

std::string to_string(DiscrepancyMethod m);

struct DiscrepancyResult {
    double deviation = 0.0;
    VertexSet a;
    VertexSet b;
    Count pairs_checked = 0;
    DiscrepancyMethod method = DiscrepancyMethod::exhaustive;
};

/// Largest vertex count accepted by discrepancy_exhaustive.
inline constexpr std::size_t kExhaustiveLimit = 16;

/// Exact maximum deviation over all pairs with |A|, |B| >= eps n.
/// For each A the extreme e(A, B) at each |B| is attained by taking the
/// vertices with the fewest / most neighbours in A, so only 2^n sets A are
/// enumerated. The graph is eps-quasirandom iff the result is < eps.
DiscrepancyResult discrepancy_exhaustive(const Graph& g, double eps);

struct SampledDiscrepancyOptions {
    std::size_t trials = 1000;
    Seed seed = 0;
    /// Alternating best-response rounds applied to each random starting
    /// pair; 0 evaluates the uniform pair only.
    unsigned refine_rounds = 0;
    unsigned workers = 0;
};

/// Lower-bound estimator of the exhaustive value. Each trial draws |A| and
/// |B| uniformly from [ceil(eps n), n] and uniform subsets of those sizes.
/// When the trial budget covers every admissible pair (small n) the pairs
/// are enumerated one by one instead, so the result is exact.
DiscrepancyResult discrepancy_sampled(const Graph& g, double eps, const SampledDiscrepancyOptions& options);

/// Number of admissible (A, B) pairs, or nullopt when it exceeds 2^63.
std::optional<Count> admissible_pair_count(std::size_t n, double eps);

/// Labelled 4-cycles: 2 * sum_u sum_{v != u} C(|N(u) ∩ N(v)|, 2).
Count count_c4_labelled(const Graph& g);

/// Trace of P^4 for the walk matrix P = D^-1 A. Throws on isolated vertices.
double trace_p4(const Graph& g);

struct LambdaBound {
    double value = 1.0;
    bool connected = false;
    bool bipartite = false;
    /// False when the graph is disconnected or bipartite; value is then 1.
    bool certified = false;
};

/// Upper bound (trace(P^4) - 1)^(1/4) on lambda = max(|lambda_2|, |lambda_n|).
LambdaBound lambda_bound_from_trace(const Graph& g);

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_estimate, std::size_t iterations)
        : std::runtime_error(what), last_estimate_(last_estimate), iterations_(iterations) {}

    double last_estimate() const noexcept { return last_estimate_; }
    std::size_t iterations() const noexcept { return iterations_; }

private:
    double last_estimate_;
    std::size_t iterations_;
};

/// Power iteration on the square of D^-1/2 A D^-1/2 with the top eigenvector
/// (entries proportional to sqrt d(v)) projected out. Stops once the
/// eigen-residual drops below tol; the returned value never exceeds lambda.
double lambda_estimate(const Graph& g, double tol = 1e-10, std::size_t max_iter = 100000);

struct QuasirandomnessReport {
    double rho = 0.0;
    double eps_target = 0.0;
    double discrepancy = 0.0;
    DiscrepancyMethod method = DiscrepancyMethod::sampled;
    Count pairs_checked = 0;
    Count c4_labelled = 0;
    std::optional<double> trace_p4;
    double lambda_bound = 1.0;
    std::optional<double> lambda_estimate;
    bool connected = false;
    bool bipartite = false;
};

struct CertifyOptions {
    double eps = 0.1;
    std::size_t trials = 1000;
    Seed seed = 0;
    bool exhaustive = false;
    unsigned refine_rounds = 0;
    bool estimate_lambda = true;
    double lambda_tol = 1e-6;
    std::size_t lambda_max_iter = 20000;
    unsigned workers = 0;
};

QuasirandomnessReport certify(const Graph& g, const CertifyOptions& options);

}  // namespace qwalk
