#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <numbers>

#include "qwalk/certify.hpp"
#include "support.hpp"

namespace qwalk {
namespace {

using testing::adjacency;
using testing::random_graph;
using testing::random_graph_min_degree_one;

// Maximum normalized deviation by literal enumeration of every admissible
// pair of subsets.
double brute_discrepancy(const Graph& g, double eps) {
    const std::size_t n = g.vertex_count();
    const auto k = static_cast<std::size_t>(std::ceil(eps * static_cast<double>(n) - 1e-9));
    const auto a = adjacency(g);
    const double rho = static_cast<double>(g.edge_count()) / (static_cast<double>(n) * (n - 1) / 2.0);
    double best = 0.0;
    for (std::uint64_t ma = 1; ma < (std::uint64_t{1} << n); ++ma) {
        if (static_cast<std::size_t>(std::popcount(ma)) < k) continue;
        for (std::uint64_t mb = 1; mb < (std::uint64_t{1} << n); ++mb) {
            if (static_cast<std::size_t>(std::popcount(mb)) < k) continue;
            const double area = static_cast<double>(std::popcount(ma)) * std::popcount(mb);
            const double e = static_cast<double>(testing::edge_count_between(a, ma, mb));
            best = std::max(best, std::abs(e - rho * area) / area);
        }
    }
    return best;
}

Eigen::MatrixXd normalized_adjacency(const Graph& g) {
    const std::size_t n = g.vertex_count();
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const Edge& e : g.edges()) {
        const double w = 1.0 / std::sqrt(static_cast<double>(g.degree(e.u)) * static_cast<double>(g.degree(e.v)));
        s(e.u, e.v) = s(e.v, e.u) = w;
    }
    return s;
}

Eigen::VectorXd walk_spectrum(const Graph& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized_adjacency(g));
    return solver.eigenvalues();  // ascending
}

double dense_lambda(const Graph& g) {
    const Eigen::VectorXd mu = walk_spectrum(g);
    const Eigen::Index n = mu.size();
    return std::max(std::abs(mu(n - 2)), std::abs(mu(0)));
}

std::uint64_t brute_c4(const Graph& g) {
    const std::size_t n = g.vertex_count();
    const auto a = adjacency(g);
    std::uint64_t count = 0;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s) {
                    if (p == r || q == s) continue;
                    if (a[p][q] && a[q][r] && a[r][s] && a[s][p]) ++count;
                }
    return count;
}

TEST(MinSetSize, RoundsUpWithSlack) {
    EXPECT_EQ(min_set_size(10, 0.3), 3u);
    EXPECT_EQ(min_set_size(10, 0.25), 3u);
    EXPECT_EQ(min_set_size(100, 0.05), 5u);
    EXPECT_EQ(min_set_size(10, 0.1), 1u);
    EXPECT_THROW(min_set_size(10, 0.05), std::invalid_argument);
    EXPECT_THROW(min_set_size(10, 0.0), std::invalid_argument);
}

TEST(AdmissiblePairs, MatchesBinomialSum) {
    // n = 6, k = 2: 2^6 - 1 - 6 = 57 sets per side.
    EXPECT_EQ(admissible_pair_count(6, 0.3), std::optional<Count>(57u * 57u));
    EXPECT_EQ(admissible_pair_count(10, 0.1), std::optional<Count>(1023u * 1023u));
    EXPECT_FALSE(admissible_pair_count(200, 0.1).has_value());
}

TEST(Discrepancy, ExhaustiveMatchesBruteForce) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const std::size_t n = 4 + seed % 5;
        const Graph g = random_graph(n, 0.5, seed);
        if (g.edge_count() == 0) continue;
        for (double eps : {0.25, 0.5}) {
            const DiscrepancyResult r = discrepancy_exhaustive(g, eps);
            EXPECT_NEAR(r.deviation, brute_discrepancy(g, eps), 1e-12) << "seed " << seed << " eps " << eps;
            EXPECT_EQ(r.method, DiscrepancyMethod::exhaustive);
        }
    }
}

TEST(Discrepancy, ExhaustiveWitnessAttainsTheValue) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = random_graph(12, 0.4, seed);
        const double eps = 0.25;
        const DiscrepancyResult r = discrepancy_exhaustive(g, eps);
        ASSERT_GE(r.a.size(), min_set_size(12, eps));
        ASSERT_GE(r.b.size(), min_set_size(12, eps));
        EXPECT_EQ(r.deviation, pair_deviation(edges_between(g, r.a, r.b), r.a.size(), r.b.size(), density(g)));
    }
}

TEST(Discrepancy, ExhaustiveRefusesLargeGraphs) {
    EXPECT_THROW(discrepancy_exhaustive(gen_complete(kExhaustiveLimit + 1), 0.5), std::invalid_argument);
}

TEST(Discrepancy, ExhaustiveBudgetEnumeratesEveryPair) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Graph g = random_graph(7, 0.5, seed + 40);
        if (g.edge_count() == 0) continue;
        const Count total = *admissible_pair_count(7, 0.3);
        const DiscrepancyResult r = discrepancy_sampled(g, 0.3, {static_cast<std::size_t>(total), 5, 0, 1});
        EXPECT_EQ(r.deviation, discrepancy_exhaustive(g, 0.3).deviation);
        EXPECT_EQ(r.pairs_checked, total);
        EXPECT_NEAR(r.deviation, brute_discrepancy(g, 0.3), 1e-12);
    }
}

TEST(Discrepancy, SampledIsALowerBoundWithGenuineWitness) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Graph g = random_graph(14, 0.5, seed);
        const double exact = discrepancy_exhaustive(g, 0.2).deviation;
        for (unsigned rounds : {0u, 2u}) {
            const DiscrepancyResult r = discrepancy_sampled(g, 0.2, {300, seed, rounds, 2});
            EXPECT_EQ(r.method, DiscrepancyMethod::sampled);
            EXPECT_LE(r.deviation, exact);
            EXPECT_EQ(r.deviation, pair_deviation(edges_between(g, r.a, r.b), r.a.size(), r.b.size(), density(g)));
            EXPECT_GE(r.a.size(), min_set_size(14, 0.2));
            EXPECT_GE(r.b.size(), min_set_size(14, 0.2));
        }
    }
}

TEST(Discrepancy, SampledIsDeterministicAndThreadCountFree) {
    const Graph g = gen_gnp(200, 0.5, 3);
    const DiscrepancyResult a = discrepancy_sampled(g, 0.1, {200, 7, 1, 1});
    const DiscrepancyResult b = discrepancy_sampled(g, 0.1, {200, 7, 1, 4});
    EXPECT_EQ(a.deviation, b.deviation);
    EXPECT_EQ(a.a, b.a);
    EXPECT_EQ(a.b, b.b);
    EXPECT_EQ(a.pairs_checked, 200u * 3u);
}

TEST(Discrepancy, RefinementNeverLowersTheEstimate) {
    const Graph g = gen_gnp(300, 0.5, 11);
    const double plain = discrepancy_sampled(g, 0.1, {100, 2, 0, 1}).deviation;
    const double refined = discrepancy_sampled(g, 0.1, {100, 2, 2, 1}).deviation;
    EXPECT_GE(refined, plain);
}

TEST(Discrepancy, RandomGraphsLookQuasirandomAndCliquePairsDoNot) {
    EXPECT_LT(discrepancy_sampled(gen_gnp(1000, 0.5, 1), 0.1, {200, 1, 0, 0}).deviation, 0.05);
    // Two disjoint cliques: A = B = one clique spans 2 C(s,2) edges against rho s^2.
    const Graph g = gen_two_clique_bridge(100, 0.99);
    EXPECT_GT(discrepancy_sampled(g, 0.3, {50, 1, 2, 0}).deviation, 0.3);
}

TEST(C4, MatchesEnumerationOfLabelledCycles) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const Graph g = random_graph(9, 0.5, seed);
        EXPECT_EQ(count_c4_labelled(g), brute_c4(g)) << "seed " << seed;
    }
    EXPECT_EQ(count_c4_labelled(gen_complete(4)), 24u);
    EXPECT_EQ(count_c4_labelled(gen_cycle(4)), 8u);
    EXPECT_EQ(count_c4_labelled(gen_cycle(5)), 0u);
}

TEST(TraceP4, MatchesDenseEigendecomposition) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t n = 3 + seed % 8;
        const Graph g = random_graph_min_degree_one(n, 0.4, seed);
        const Eigen::VectorXd mu = walk_spectrum(g);
        EXPECT_NEAR(trace_p4(g), mu.array().pow(4).sum(), 1e-9) << "seed " << seed;
    }
}

TEST(TraceP4, RejectsIsolatedVertices) {
    EXPECT_THROW(trace_p4(Graph::from_edges(3, std::vector<Edge>{{0, 1}})), std::invalid_argument);
}

TEST(LambdaBound, DominatesTheTrueValue) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Graph g = random_graph_min_degree_one(10, 0.5, seed);
        const LambdaBound b = lambda_bound_from_trace(g);
        if (!b.certified) continue;
        EXPECT_GE(b.value + 1e-12, dense_lambda(g)) << "seed " << seed;
    }
}

TEST(LambdaBound, UncertifiedForBipartiteOrDisconnected) {
    const LambdaBound bip = lambda_bound_from_trace(gen_complete_bipartite(3, 3));
    EXPECT_FALSE(bip.certified);
    EXPECT_TRUE(bip.bipartite);
    EXPECT_EQ(bip.value, 1.0);
    const LambdaBound split = lambda_bound_from_trace(Graph::from_edges(4, std::vector<Edge>{{0, 1}, {2, 3}}));
    EXPECT_FALSE(split.certified);
    EXPECT_FALSE(split.connected);
}

TEST(LambdaBound, SmallOnDenseRandomGraphs) { EXPECT_LE(lambda_bound_from_trace(gen_gnp(500, 0.5, 2)).value, 0.5); }

TEST(LambdaEstimate, OddCyclesMatchClosedForm) {
    for (std::size_t n : {5u, 7u, 9u}) {
        EXPECT_NEAR(lambda_estimate(gen_cycle(n)), std::cos(std::numbers::pi / static_cast<double>(n)), 1e-8);
    }
}

TEST(LambdaEstimate, CompleteGraph) {
    // Spectrum of K_n's walk matrix: 1 and -1/(n-1).
    EXPECT_NEAR(lambda_estimate(gen_complete(8)), 1.0 / 7.0, 1e-8);
}

TEST(LambdaEstimate, MatchesDenseSolver) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Graph g = random_graph_min_degree_one(12, 0.4, seed);
        if (is_bipartite(g)) continue;
        EXPECT_NEAR(lambda_estimate(g, 1e-12), dense_lambda(g), 1e-7) << "seed " << seed;
    }
}

TEST(LambdaEstimate, RejectsBipartiteAndDisconnected) {
    EXPECT_THROW(lambda_estimate(gen_cycle(6)), std::invalid_argument);
    EXPECT_THROW(lambda_estimate(Graph::from_edges(6, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}})),
                 std::invalid_argument);
}

TEST(LambdaEstimate, ReportsNonConvergence) {
    try {
        lambda_estimate(gen_cycle(101), 1e-14, 3);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_EQ(e.iterations(), 3u);
        EXPECT_GT(e.last_estimate(), 0.0);
    }
}

TEST(Certify, ReportFieldsAreConsistent) {
    const Graph g = gen_gnp(300, 0.5, 5);
    CertifyOptions o;
    o.eps = 0.1;
    o.trials = 100;
    o.seed = 3;
    const QuasirandomnessReport r = certify(g, o);
    EXPECT_DOUBLE_EQ(r.rho, density(g));
    EXPECT_EQ(r.eps_target, 0.1);
    EXPECT_EQ(r.method, DiscrepancyMethod::sampled);
    EXPECT_EQ(r.c4_labelled, count_c4_labelled(g));
    ASSERT_TRUE(r.trace_p4.has_value());
    EXPECT_EQ(*r.trace_p4, trace_p4(g));
    ASSERT_TRUE(r.lambda_estimate.has_value());
    EXPECT_LE(*r.lambda_estimate, r.lambda_bound + 1e-12);
    EXPECT_TRUE(r.connected);
    EXPECT_FALSE(r.bipartite);
}

TEST(Certify, ExhaustiveModeAndBipartiteHost) {
    CertifyOptions o;
    o.eps = 0.5;
    o.exhaustive = true;
    const QuasirandomnessReport r = certify(gen_complete_bipartite(3, 3), o);
    EXPECT_EQ(r.method, DiscrepancyMethod::exhaustive);
    EXPECT_TRUE(r.bipartite);
    EXPECT_EQ(r.lambda_bound, 1.0);
    EXPECT_FALSE(r.lambda_estimate.has_value());
}

}  // namespace
}  // namespace qwalk
