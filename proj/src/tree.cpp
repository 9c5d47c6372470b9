#include "qwalk/tree.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace qwalk {

RootedTree::RootedTree(std::vector<Vertex> parents) : parent_(std::move(parents)) {
    if (parent_.empty()) throw GraphError("a rooted tree needs at least one vertex");
    if (parent_.size() > std::numeric_limits<Vertex>::max() - 1) throw GraphError("tree too large");
    if (parent_[0] != kNoParent) throw GraphError("the root v_0 must not have a parent");
    const std::size_t size = parent_.size();
    std::vector<std::size_t> child_count(size, 0);
    for (std::size_t j = 1; j < size; ++j) {
        if (parent_[j] >= j) {
            throw GraphError("parent of v_" + std::to_string(j) + " must precede it in the enumeration");
        }
        ++child_count[parent_[j]];
    }
    child_offsets_.assign(size + 1, 0);
    for (std::size_t j = 0; j < size; ++j) child_offsets_[j + 1] = child_offsets_[j] + child_count[j];
    children_.resize(size - 1);
    std::vector<std::size_t> cursor(child_offsets_.begin(), child_offsets_.end() - 1);
    depth_.assign(size, 0);
    // Ascending j keeps each child list sorted.
    for (std::size_t j = 1; j < size; ++j) {
        children_[cursor[parent_[j]]++] = static_cast<Vertex>(j);
        depth_[j] = depth_[parent_[j]] + 1;
    }
}

std::size_t RootedTree::max_degree() const noexcept {
    std::size_t best = 0;
    for (Vertex j = 0; j < size(); ++j) best = std::max(best, degree(j));
    return best;
}

RootedTree build_tree(std::span<const std::int64_t> parents) {
    if (parents.empty()) throw GraphError("a rooted tree needs at least one vertex");
    if (parents[0] >= 0) throw GraphError("the root v_0 must not have a parent");
    std::vector<Vertex> out(parents.size());
    out[0] = RootedTree::kNoParent;
    for (std::size_t j = 1; j < parents.size(); ++j) {
        if (parents[j] < 0 || static_cast<std::size_t>(parents[j]) >= j) {
            throw GraphError("parent of v_" + std::to_string(j) + " must precede it in the enumeration");
        }
        out[j] = static_cast<Vertex>(parents[j]);
    }
    return RootedTree(std::move(out));
}

RootedTree gen_path_tree(std::size_t edges) {
    std::vector<Vertex> parents(edges + 1);
    parents[0] = RootedTree::kNoParent;
    for (std::size_t j = 1; j <= edges; ++j) parents[j] = static_cast<Vertex>(j - 1);
    return RootedTree(std::move(parents));
}

RootedTree gen_nary_tree(std::size_t branching, std::size_t depth) {
    std::vector<Vertex> parents{RootedTree::kNoParent};
    std::size_t level_begin = 0;
    std::size_t level_end = 1;
    for (std::size_t d = 0; d < depth; ++d) {
        for (std::size_t u = level_begin; u < level_end; ++u)
            for (std::size_t c = 0; c < branching; ++c) parents.push_back(static_cast<Vertex>(u));
        level_begin = level_end;
        level_end = parents.size();
    }
    return RootedTree(std::move(parents));
}

RootedTree gen_random_tree(std::size_t edges, std::size_t max_degree, Seed seed) {
    if (max_degree < 2) throw std::invalid_argument("random trees need max_degree >= 2");
    std::vector<Vertex> parents(edges + 1);
    parents[0] = RootedTree::kNoParent;
    std::vector<std::size_t> degree(edges + 1, 0);
    std::vector<Vertex> open{0};  // vertices with spare degree
    SplitMix64 rng(seed);
    for (std::size_t j = 1; j <= edges; ++j) {
        if (open.empty()) throw std::logic_error("no vertex has spare degree");
        const std::size_t pick = rng.below(open.size());
        const Vertex p = open[pick];
        parents[j] = p;
        if (++degree[p] >= max_degree) {
            open[pick] = open.back();
            open.pop_back();
        }
        degree[j] = 1;
        open.push_back(static_cast<Vertex>(j));
    }
    return RootedTree(std::move(parents));
}

TreeHomomorphism random_homomorphism(const Graph& g, const RootedTree& t, ListModel& model, Vertex root_image) {
    if (model.vertex_count() != g.vertex_count()) throw std::invalid_argument("list model does not match graph");
    if (root_image >= g.vertex_count()) throw std::invalid_argument("root image out of range");
    if (t.edge_count() > 0 && g.degree(root_image) == 0) throw std::invalid_argument("root image is isolated");
    TreeHomomorphism h;
    h.host_vertices = g.vertex_count();
    h.image.resize(t.size());
    h.image[0] = root_image;
    for (Vertex j = 1; j < t.size(); ++j) h.image[j] = model.take(g, h.image[t.parent(j)]);
    return h;
}

bool is_homomorphism(const Graph& g, const RootedTree& t, const TreeHomomorphism& h) {
    if (h.image.size() != t.size() || h.host_vertices != g.vertex_count()) return false;
    for (Vertex j = 1; j < t.size(); ++j) {
        if (!g.has_edge(h.image[t.parent(j)], h.image[j])) return false;
    }
    return true;
}

std::vector<Count> tree_visit_counts(const RootedTree& t, const TreeHomomorphism& h) {
    std::vector<Count> visits(h.host_vertices, 0);
    for (Vertex j = 1; j < t.size(); ++j) ++visits[h.image[t.parent(j)]];
    return visits;
}

EdgeSubgraph image_subgraph(const RootedTree& t, const TreeHomomorphism& h) {
    EdgeAccumulator acc(h.host_vertices);
    for (Vertex j = 1; j < t.size(); ++j) acc.add(h.image[t.parent(j)], h.image[j]);
    return std::move(acc).finish();
}

namespace {

// Collects the still-attached edges of the branch hanging from child c.
void collect_branch(const RootedTree& t, Vertex c, std::vector<char>& attached, std::vector<Vertex>& out) {
    std::vector<Vertex> stack{c};
    attached[c] = 0;
    while (!stack.empty()) {
        const Vertex x = stack.back();
        stack.pop_back();
        out.push_back(x);
        for (Vertex y : t.children(x)) {
            if (attached[y]) {
                attached[y] = 0;
                stack.push_back(y);
            }
        }
    }
}

}  // namespace

TreeDecomposition decompose_tree(const RootedTree& t, std::size_t piece_size) {
    const std::size_t total = t.edge_count();
    if (piece_size == 0) throw std::invalid_argument("piece size must be positive");
    if (piece_size > total) {
        throw std::invalid_argument("piece size " + std::to_string(piece_size) + " exceeds the tree's " +
                                    std::to_string(total) + " edges");
    }

    // Deepest first, smallest index on ties: when v is reached every deeper
    // vertex already holds fewer than L descendants, so v is exactly the
    // vertex the repeated global selection would pick next.
    std::vector<Vertex> order(t.size());
    std::iota(order.begin(), order.end(), Vertex{0});
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return t.depth(a) > t.depth(b); });

    std::vector<char> attached(t.size(), 1);  // edge above v_j still in T
    attached[0] = 0;
    std::vector<std::size_t> descendants(t.size(), 0);
    TreeDecomposition out;

    for (Vertex v : order) {
        const auto kids = t.children(v);
        std::size_t below = 0;
        for (Vertex c : kids)
            if (attached[c]) below += 1 + descendants[c];

        std::size_t next_child = 0;
        while (below >= piece_size) {
            TreePiece piece;
            piece.root = v;
            std::size_t taken = 0;
            while (taken < piece_size) {
                while (!attached[kids[next_child]]) ++next_child;
                const Vertex c = kids[next_child];
                taken += 1 + descendants[c];
                collect_branch(t, c, attached, piece.edges);
            }
            std::sort(piece.edges.begin(), piece.edges.end());
            below -= taken;
            out.pieces.push_back(std::move(piece));
        }
        descendants[v] = below;
    }

    // Whatever is still attached forms a subtree through v_0 that also
    // contains the root of the last piece.
    std::vector<Vertex> rest;
    for (Vertex j = 1; j < t.size(); ++j)
        if (attached[j]) rest.push_back(j);
    if (!rest.empty()) {
        TreePiece& last = out.pieces.back();
        last.root = 0;
        last.edges.insert(last.edges.end(), rest.begin(), rest.end());
        std::sort(last.edges.begin(), last.edges.end());
    }
    return out;
}

}  // namespace qwalk
