#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "qwalk/walk.hpp"
#include "support.hpp"

namespace qwalk {
namespace {

using testing::random_graph_min_degree_one;

TEST(ListModel, EntriesAreNeighboursAndReplayable) {
    const Graph g = gen_gnp(60, 0.3, 2);
    ListModel a(17, 60);
    const ListModel b(17, 60);
    for (Vertex v = 0; v < 60; ++v) {
        for (Count j = 1; j <= 20; ++j) {
            const Vertex w = a.entry(g, v, j);
            EXPECT_TRUE(g.has_edge(v, w));
            EXPECT_EQ(w, b.entry(g, v, j));
        }
    }
    EXPECT_EQ(a.take(g, 4), b.entry(g, 4, 1));
    EXPECT_EQ(a.take(g, 4), b.entry(g, 4, 2));
    EXPECT_EQ(a.consumed(4), 2u);
    EXPECT_EQ(a.consumed(5), 0u);
}

TEST(ListModel, EntriesAreRoughlyUniform) {
    const Graph g = gen_complete(5);
    const ListModel m(3, 5);
    std::vector<int> hits(5, 0);
    const int draws = 40000;
    for (Count j = 1; j <= draws; ++j) ++hits[m.entry(g, 0, j)];
    EXPECT_EQ(hits[0], 0);
    for (Vertex v = 1; v < 5; ++v) EXPECT_NEAR(hits[v], draws / 4.0, 5 * std::sqrt(draws * 0.25 * 0.75));
}

TEST(ListModel, IsolatedVertexHasNoList) {
    const Graph g = Graph::from_edges(3, std::vector<Edge>{{0, 1}});
    const ListModel m(1, 3);
    EXPECT_THROW(m.entry(g, 2, 1), std::invalid_argument);
}

TEST(Walk, FollowsEdgesAndCountsDepartures) {
    const Graph g = gen_gnp(80, 0.2, 5);
    ListModel m(9, 80);
    const WalkTrace t = run_walk(g, m, 3, 5000);
    ASSERT_EQ(t.sequence.size(), 5001u);
    EXPECT_EQ(t.sequence.front(), 3u);
    std::vector<Count> departures(80, 0);
    for (std::size_t i = 0; i + 1 < t.sequence.size(); ++i) {
        EXPECT_TRUE(g.has_edge(t.sequence[i], t.sequence[i + 1]));
        ++departures[t.sequence[i]];
    }
    EXPECT_EQ(t.visit_counts, departures);
    // Every departure consumed exactly one list entry.
    for (Vertex v = 0; v < 80; ++v) EXPECT_EQ(m.consumed(v), departures[v]);
}

TEST(Walk, ZeroStepsAndErrors) {
    const Graph g = gen_cycle(5);
    ListModel m(1, 5);
    const WalkTrace t = run_walk(g, m, 2, 0);
    EXPECT_EQ(t.sequence, std::vector<Vertex>{2});
    EXPECT_EQ(t.visit_counts, std::vector<Count>(5, 0));
    EXPECT_TRUE(walk_subgraph(t).edges().empty());
    EXPECT_THROW(run_walk(g, m, 5, 1), std::invalid_argument);
    ListModel wrong(1, 4);
    EXPECT_THROW(run_walk(g, wrong, 0, 1), std::invalid_argument);
}

TEST(Walk, SubgraphIsTheSetOfTraversedEdges) {
    const Graph g = gen_gnp(50, 0.3, 8);
    ListModel m(2, 50);
    const WalkTrace t = run_walk(g, m, 0, 700);
    std::set<Edge> oracle;
    for (std::size_t i = 0; i + 1 < t.sequence.size(); ++i) oracle.insert(Edge(t.sequence[i], t.sequence[i + 1]));
    const EdgeSubgraph s = walk_subgraph(t);
    EXPECT_EQ(s.edges(), std::vector<Edge>(oracle.begin(), oracle.end()));
    EXPECT_TRUE(s.is_subgraph_of(g));
}

TEST(ListSubgraph, MatchesDirectConstruction) {
    const Graph g = gen_gnp(40, 0.4, 1);
    const ListModel m(12, 40);
    for (double alpha : {0.0, 0.3, 1.0, 2.5}) {
        std::set<Edge> oracle;
        for (Vertex v = 0; v < 40; ++v) {
            const auto prefix = static_cast<Count>(std::floor(alpha * static_cast<double>(g.degree(v)) + 1e-9));
            for (Count j = 1; j <= prefix; ++j) oracle.insert(Edge(v, m.entry(g, v, j)));
        }
        const EdgeSubgraph s = list_subgraph(g, m, alpha);
        EXPECT_EQ(s.edges(), std::vector<Edge>(oracle.begin(), oracle.end())) << "alpha " << alpha;
        for (const Edge& e : g.edges()) EXPECT_EQ(list_retains_edge(g, m, e.u, e.v, alpha), s.contains(e));
    }
}

TEST(ListSubgraph, MonotoneInAlpha) {
    const Graph g = gen_gnp(60, 0.5, 4);
    const ListModel m(6, 60);
    EdgeSubgraph prev = list_subgraph(g, m, 0.0);
    EXPECT_EQ(prev.size(), 0u);
    for (double alpha = 0.1; alpha < 2.0; alpha += 0.1) {
        const EdgeSubgraph next = list_subgraph(g, m, alpha);
        EXPECT_TRUE(prev.is_subset_of(next));
        prev = next;
    }
}

TEST(ListSubgraph, PrefixLengthAvoidsFloatingPointUndershoot) {
    // 0.29 * 100 is 28.999999999999996 in binary floating point.
    EXPECT_EQ(list_prefix_length(0.29, 100), 29u);
    EXPECT_EQ(list_prefix_length(7.0 / 13.0, 13), 7u);
    EXPECT_EQ(list_prefix_length(0.5, 101), 50u);
    EXPECT_THROW(list_prefix_length(-0.1, 10), std::invalid_argument);
}

TEST(Retention, ClosedFormValues) {
    const Graph g = gen_circulant(300, 50);
    EXPECT_NEAR(retention_probability(g, 0, 1, 0.5), 1.0 - std::pow(0.99, 100), 1e-12);
    EXPECT_NEAR(1.0 - std::pow(0.99, 100), 0.6340, 5e-5);
    EXPECT_EQ(retention_probability(g, 0, 1, 0.0), 0.0);
    EXPECT_THROW(retention_probability(g, 0, 150, 0.5), std::invalid_argument);
}

TEST(Retention, MonteCarloAgreesOnIrregularEdge) {
    // d(0) = 3, d(1) = 2; at alpha = 0.5 both prefixes have length 1.
    const Graph g = Graph::from_edges(5, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {1, 4}});
    const double expected = retention_probability(g, 0, 1, 0.5);
    EXPECT_NEAR(expected, 1.0 - (2.0 / 3.0) * 0.5, 1e-15);
    const int trials = 40000;
    int kept = 0;
    for (int t = 0; t < trials; ++t) kept += list_retains_edge(g, ListModel(derive_seed(5, t), 5), 0, 1, 0.5);
    const double se = std::sqrt(expected * (1 - expected) / trials);
    EXPECT_NEAR(kept / static_cast<double>(trials), expected, 4 * se);
}

TEST(Sandwich, WalkSitsBetweenListSubgraphs) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Graph g = random_graph_min_degree_one(40, 0.2, seed);
        ListModel m(seed * 31 + 1, 40);
        const WalkTrace t = run_walk(g, m, 0, 800 + 37 * seed);
        const SandwichBounds b = sandwich_bounds(t, g);
        const EdgeSubgraph walked = walk_subgraph(t);
        EXPECT_TRUE(list_subgraph(g, m, b.alpha_lo).is_subset_of(walked)) << "seed " << seed;
        EXPECT_TRUE(walked.is_subset_of(list_subgraph(g, m, b.alpha_hi))) << "seed " << seed;
        EXPECT_LE(b.alpha_lo, b.alpha_hi);
    }
}

TEST(Stationary, ProportionalToDegree) {
    const Graph g = gen_star(4);
    const Distribution pi = stationary(g);
    EXPECT_DOUBLE_EQ(pi[0], 0.5);
    EXPECT_DOUBLE_EQ(pi[1], 0.125);
    EXPECT_THROW(stationary(Graph::from_edges(3, {})), std::invalid_argument);
}

TEST(Distribution, Validation) {
    EXPECT_THROW(Distribution({0.5, 0.6}), std::invalid_argument);
    EXPECT_THROW(Distribution({1.5, -0.5}), std::invalid_argument);
    EXPECT_NO_THROW(Distribution({0.25, 0.75}));
    const Distribution p = Distribution::point_mass(4, 2);
    EXPECT_EQ(p[2], 1.0);
}

TEST(TotalVariation, PointMassAgainstStationary) {
    const Graph g = gen_gnp(50, 0.5, 3);
    const Distribution pi = stationary(g);
    EXPECT_NEAR(tv_distance(Distribution::point_mass(50, 7), pi), 1.0 - pi[7], 1e-12);
    EXPECT_EQ(tv_distance(pi, pi), 0.0);
    EXPECT_THROW(tv_distance(pi, Distribution::point_mass(3, 0)), std::invalid_argument);
}

TEST(StepDistribution, StepZeroIsPointMass) {
    const Graph g = gen_cycle(7);
    const Distribution p = empirical_step_distribution(g, 3, 0, 100, 1);
    EXPECT_EQ(p[3], 1.0);
}

TEST(StepDistribution, MatchesExactMatrixPower) {
    const Graph g = random_graph_min_degree_one(8, 0.4, 21);
    const auto a = testing::adjacency(g);
    std::vector<double> law(8, 0.0);
    law[0] = 1.0;
    for (int step = 0; step < 3; ++step) {
        std::vector<double> next(8, 0.0);
        for (Vertex v = 0; v < 8; ++v)
            for (Vertex w = 0; w < 8; ++w)
                if (a[v][w]) next[w] += law[v] / static_cast<double>(g.degree(v));
        law = next;
    }
    const std::size_t trials = 200000;
    const Distribution p = empirical_step_distribution(g, 0, 3, trials, 8, 2);
    for (Vertex v = 0; v < 8; ++v) {
        const double se = std::sqrt(law[v] * (1 - law[v]) / static_cast<double>(trials));
        EXPECT_NEAR(p[v], law[v], 5 * se + 1e-12) << "vertex " << v;
    }
    EXPECT_EQ(p.probabilities(), empirical_step_distribution(g, 0, 3, trials, 8, 1).probabilities());
}

TEST(Subsequences, RowsPartitionTheWalk) {
    const Graph g = gen_gnp(30, 0.5, 2);
    ListModel m(4, 30);
    const WalkTrace t = run_walk(g, m, 0, 1003);
    const Count block = 10;
    const auto rows = subsequence_visit_counts(t, block);
    ASSERT_EQ(rows.size(), block);
    std::vector<Count> summed(30, 0);
    for (Count i = 0; i < block; ++i) {
        Count total = 0;
        for (Vertex v = 0; v < 30; ++v) {
            total += rows[i][v];
            summed[v] += rows[i][v];
        }
        EXPECT_EQ(total, 100u);
        EXPECT_EQ(rows[i][t.sequence[i]] >= 1, true);
    }
    std::vector<Count> expected = t.visit_counts;
    for (Count i = 1000; i < 1003; ++i) --expected[t.sequence[i]];
    EXPECT_EQ(summed, expected);
    EXPECT_THROW(subsequence_visit_counts(t, 0), std::invalid_argument);
    EXPECT_EQ(default_subsequence_length(1000), 48u);
}

TEST(HitProbability, RespectsItsFloorAndValidates) {
    const Graph g = gen_gnp(200, 0.5, 6);
    std::vector<Vertex> members;
    for (Vertex v = 0; v < 60; ++v) members.push_back(v);
    const VertexSet s = VertexSet::of(200, members);
    const Vertex start = *lowest_balanced_vertex(g, 0.05);
    const HitProbability h = hit_probability_check(g, start, s, 3, 20000, 1, 0.05);
    EXPECT_NEAR(h.floor, 0.3 - 9 * std::sqrt(0.05) / density(g), 1e-12);
    EXPECT_GE(h.empirical, h.floor);
    EXPECT_NEAR(h.empirical, 0.3, 0.03);
    EXPECT_THROW(hit_probability_check(g, start, s, 1, 100, 1, 0.05), std::invalid_argument);
    EXPECT_THROW(hit_probability_check(g, start, VertexSet::of(200, std::vector<Vertex>{1}), 3, 100, 1, 0.05),
                 std::invalid_argument);
    const Graph star = gen_star(30);
    EXPECT_THROW(hit_probability_check(star, 0, VertexSet::full(31), 3, 100, 1, 0.05), std::invalid_argument);
}

}  // namespace
}  // namespace qwalk
