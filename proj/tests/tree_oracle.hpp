#pragma once

#include <set>
#include <string>
#include <vector>

#include "qwalk/tree.hpp"

namespace qwalk::testing {

// Returns an empty string when the decomposition is valid, otherwise a
// description of the first violation found.
inline std::string decomposition_violation(const RootedTree& t, const TreeDecomposition& d, std::size_t piece_size) {
    std::vector<int> owner(t.size(), -1);
    for (std::size_t p = 0; p < d.pieces.size(); ++p) {
        const TreePiece& piece = d.pieces[p];
        if (piece.edges.size() < piece_size || piece.edges.size() > 3 * piece_size) {
            return "piece " + std::to_string(p) + " has " + std::to_string(piece.edges.size()) + " edges";
        }
        const std::set<Vertex> members(piece.edges.begin(), piece.edges.end());
        if (members.size() != piece.edges.size()) return "piece " + std::to_string(p) + " repeats an edge";
        if (members.contains(piece.root)) return "piece " + std::to_string(p) + " contains the edge above its root";
        for (Vertex j : piece.edges) {
            if (j == 0 || j >= t.size()) return "edge index out of range";
            if (owner[j] != -1) return "edge " + std::to_string(j) + " in two pieces";
            owner[j] = static_cast<int>(p);
            const Vertex up = t.parent(j);
            if (up != piece.root && !members.contains(up)) {
                return "piece " + std::to_string(p) + " is not a subtree hanging from its root";
            }
        }
    }
    for (Vertex j = 1; j < t.size(); ++j)
        if (owner[j] == -1) return "edge " + std::to_string(j) + " not covered";
    return "";
}

}  // namespace qwalk::testing
