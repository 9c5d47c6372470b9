#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/random.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Rooted tree on v_0 ... v_k whose enumeration is prefix-connected: the
/// parent of v_j precedes it, so every prefix v_0..v_j spans a subtree
/// containing the root. The tree edge above v_j is identified by j.
class RootedTree {
public:
    static constexpr Vertex kNoParent = std::numeric_limits<Vertex>::max();

    RootedTree() : RootedTree(std::vector<Vertex>{kNoParent}) {}

    /// parents[0] must be kNoParent; parents[j] < j for j >= 1.
    explicit RootedTree(std::vector<Vertex> parents);

    std::size_t size() const noexcept { return parent_.size(); }
    std::size_t edge_count() const noexcept { return parent_.size() - 1; }

    Vertex parent(Vertex j) const noexcept { return parent_[j]; }
    std::span<const Vertex> parents() const noexcept { return parent_; }
    std::span<const Vertex> children(Vertex j) const noexcept {
        return {children_.data() + child_offsets_[j], children_.data() + child_offsets_[j + 1]};
    }
    std::size_t depth(Vertex j) const noexcept { return depth_[j]; }

    /// Graph degree: children plus the parent edge for non-root vertices.
    std::size_t degree(Vertex j) const noexcept {
        return (child_offsets_[j + 1] - child_offsets_[j]) + (j == 0 ? 0 : 1);
    }
    std::size_t max_degree() const noexcept;

    bool operator==(const RootedTree& other) const { return parent_ == other.parent_; }

private:
    std::vector<Vertex> parent_;
    std::vector<std::size_t> child_offsets_;
    std::vector<Vertex> children_;
    std::vector<std::size_t> depth_;
};

/// parents[0] must be negative (the root); parents[j] must lie in [0, j).
RootedTree build_tree(std::span<const std::int64_t> parents);

/// Path v_0 - v_1 - ... - v_edges rooted at v_0.
RootedTree gen_path_tree(std::size_t edges);

/// Complete b-ary tree of the given depth, in breadth-first order.
RootedTree gen_nary_tree(std::size_t branching, std::size_t depth);

/// Tree with `edges` edges: v_j attaches to a uniformly chosen earlier vertex
/// whose graph degree is still below max_degree.
RootedTree gen_random_tree(std::size_t edges, std::size_t max_degree, Seed seed);

struct TreeHomomorphism {
    /// image[j] = phi(v_j).
    std::vector<Vertex> image;
    std::size_t host_vertices = 0;
};

/// phi(v_0) = root_image; for j = 1..k in order, phi(v_j) is the next unused
/// entry of L_{phi(parent(v_j))}. On a path tree this replays run_walk.
TreeHomomorphism random_homomorphism(const Graph& g, const RootedTree& t, ListModel& model, Vertex root_image);

/// Every tree edge lands on a host edge.
bool is_homomorphism(const Graph& g, const RootedTree& t, const TreeHomomorphism& h);

/// visits(x) = number of tree edges uv (u the parent) with phi(u) = x.
std::vector<Count> tree_visit_counts(const RootedTree& t, const TreeHomomorphism& h);

/// G_T: deduplicated image edges phi(u) phi(v).
EdgeSubgraph image_subgraph(const RootedTree& t, const TreeHomomorphism& h);

struct TreePiece {
    Vertex root = 0;
    /// Tree edges of the piece, each named by its child endpoint, ascending.
    std::vector<Vertex> edges;
};

struct TreeDecomposition {
    std::vector<TreePiece> pieces;
};

/// Splits E(T) into edge-disjoint rooted subtrees with L to 3L edges each.
/// Repeatedly takes the deepest vertex (smallest index on ties) that still
/// has at least L descendants and detaches whole branches below it, in
/// ascending child order, until at least L edges are collected. A remainder
/// of fewer than L edges is merged into the last piece, re-rooted at v_0.
TreeDecomposition decompose_tree(const RootedTree& t, std::size_t piece_size);

}  // namespace qwalk
