#include <gtest/gtest.h>

#include <random>
#include <set>

#include "qwalk/tree.hpp"
#include "support.hpp"
#include "tree_oracle.hpp"

namespace qwalk {
namespace {

using testing::decomposition_violation;

TEST(RootedTree, Structure) {
    const RootedTree t({RootedTree::kNoParent, 0, 0, 1, 1, 1});
    EXPECT_EQ(t.size(), 6u);
    EXPECT_EQ(t.edge_count(), 5u);
    EXPECT_EQ(std::vector<Vertex>(t.children(1).begin(), t.children(1).end()), (std::vector<Vertex>{3, 4, 5}));
    EXPECT_EQ(t.depth(4), 2u);
    EXPECT_EQ(t.degree(0), 2u);
    EXPECT_EQ(t.degree(1), 4u);
    EXPECT_EQ(t.degree(5), 1u);
    EXPECT_EQ(t.max_degree(), 4u);
}

TEST(RootedTree, RejectsBadParentArrays) {
    EXPECT_THROW(RootedTree({0, 0}), std::invalid_argument);
    EXPECT_THROW(RootedTree({RootedTree::kNoParent, 1}), std::invalid_argument);
    EXPECT_THROW(RootedTree({RootedTree::kNoParent, 0, 3, 1}), std::invalid_argument);
    const std::vector<std::int64_t> ok = {-1, 0, 1};
    EXPECT_EQ(build_tree(ok), gen_path_tree(2));
    const std::vector<std::int64_t> bad = {0, 0};
    EXPECT_THROW(build_tree(bad), std::invalid_argument);
}

TEST(Generators, PathNaryAndRandomTrees) {
    EXPECT_EQ(gen_path_tree(0).size(), 1u);
    const RootedTree path = gen_path_tree(10);
    EXPECT_EQ(path.max_degree(), 2u);
    EXPECT_EQ(path.depth(10), 10u);

    const RootedTree nary = gen_nary_tree(3, 2);
    EXPECT_EQ(nary.size(), 13u);
    for (Vertex j = 1; j <= 3; ++j) EXPECT_EQ(nary.parent(j), 0u);
    for (Vertex j = 4; j < 13; ++j) EXPECT_EQ(nary.parent(j), (j - 4) / 3 + 1);

    for (Seed seed = 0; seed < 20; ++seed) {
        const RootedTree t = gen_random_tree(300, 3, seed);
        EXPECT_EQ(t.edge_count(), 300u);
        EXPECT_LE(t.max_degree(), 3u);
        EXPECT_EQ(t, gen_random_tree(300, 3, seed));
    }
    EXPECT_THROW(gen_random_tree(10, 1, 0), std::invalid_argument);
}

TEST(Homomorphism, MapsTreeEdgesToHostEdges) {
    const Graph g = gen_gnp(100, 0.3, 3);
    const RootedTree t = gen_random_tree(500, 5, 4);
    ListModel m(7, 100);
    const TreeHomomorphism h = random_homomorphism(g, t, m, 11);
    EXPECT_EQ(h.image[0], 11u);
    EXPECT_TRUE(is_homomorphism(g, t, h));
    const EdgeSubgraph image = image_subgraph(t, h);
    EXPECT_TRUE(image.is_subgraph_of(g));
    EXPECT_LE(image.size(), t.edge_count());

    TreeHomomorphism broken = h;
    broken.image[1] = broken.image[t.parent(1)];
    EXPECT_FALSE(is_homomorphism(g, t, broken));
}

TEST(Homomorphism, ChildrenConsumeTheParentImageList) {
    const Graph g = gen_complete(50);
    const RootedTree star = gen_nary_tree(20, 1);
    ListModel m(2, 50);
    const TreeHomomorphism h = random_homomorphism(g, star, m, 4);
    const ListModel replay(2, 50);
    for (Vertex j = 1; j <= 20; ++j) EXPECT_EQ(h.image[j], replay.entry(g, 4, j));
    EXPECT_EQ(m.consumed(4), 20u);
    const auto visits = tree_visit_counts(star, h);
    EXPECT_EQ(visits[4], 20u);
}

TEST(Homomorphism, PathTreeReplaysTheWalk) {
    const Graph g = gen_gnp(120, 0.4, 9);
    for (Seed seed = 0; seed < 10; ++seed) {
        ListModel walk_model(seed, 120);
        ListModel tree_model(seed, 120);
        const WalkTrace w = run_walk(g, walk_model, 5, 2000);
        const TreeHomomorphism h = random_homomorphism(g, gen_path_tree(2000), tree_model, 5);
        EXPECT_EQ(h.image, w.sequence);
        const auto visits = tree_visit_counts(gen_path_tree(2000), h);
        EXPECT_EQ(visits, w.visit_counts);
    }
}

TEST(Decomposition, HandWorkedExample) {
    // Root 0 with a path 0-1-2-3 and leaves 4, 5 under 1; L = 2.
    const RootedTree t({RootedTree::kNoParent, 0, 1, 2, 1, 1});
    const TreeDecomposition d = decompose_tree(t, 2);
    EXPECT_EQ(decomposition_violation(t, d, 2), "");
    ASSERT_EQ(d.pieces.size(), 2u);
    EXPECT_EQ(d.pieces[0].root, 1u);
    EXPECT_EQ(d.pieces[0].edges, (std::vector<Vertex>{2, 3}));
    EXPECT_EQ(d.pieces[1].root, 0u);
    EXPECT_EQ(d.pieces[1].edges, (std::vector<Vertex>{1, 4, 5}));
}

TEST(Decomposition, WholeTreeAndErrors) {
    const RootedTree t = gen_random_tree(30, 4, 1);
    const TreeDecomposition whole = decompose_tree(t, 30);
    ASSERT_EQ(whole.pieces.size(), 1u);
    EXPECT_EQ(whole.pieces[0].root, 0u);
    EXPECT_EQ(whole.pieces[0].edges.size(), 30u);
    EXPECT_THROW(decompose_tree(t, 0), std::invalid_argument);
    EXPECT_THROW(decompose_tree(t, 31), std::invalid_argument);
}

TEST(Decomposition, PropertiesHoldOnRandomTrees) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t edges = 1 + rng() % 200;
        const std::size_t cap = 2 + rng() % 6;
        const std::size_t piece_size = 1 + rng() % edges;
        const RootedTree t = gen_random_tree(edges, cap, rng());
        EXPECT_EQ(decomposition_violation(t, decompose_tree(t, piece_size), piece_size), "")
            << "trial " << trial << " edges " << edges << " L " << piece_size;
    }
}

TEST(Decomposition, CheckerCatchesViolations) {
    const RootedTree t = gen_path_tree(6);
    TreeDecomposition d = decompose_tree(t, 2);
    ASSERT_EQ(decomposition_violation(t, d, 2), "");
    TreeDecomposition missing = d;
    missing.pieces.back().edges.pop_back();
    EXPECT_NE(decomposition_violation(t, missing, 2), "");
    TreeDecomposition rerooted = d;
    rerooted.pieces.front().root = 6;
    EXPECT_NE(decomposition_violation(t, rerooted, 2), "");
    EXPECT_NE(decomposition_violation(t, d, 3), "");
}

}  // namespace
}  // namespace qwalk
