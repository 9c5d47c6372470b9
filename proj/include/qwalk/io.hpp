#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "qwalk/graph.hpp"
#include "qwalk/tree.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Malformed input file; the message carries the 1-based line number.
class ParseError : public GraphError {
public:
    ParseError(std::size_t line, const std::string& what)
        : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Edge list: "n m", then m lines "u v" with 0 <= u < v < n, no repeats.
void write_graph(std::ostream& out, const Graph& g);
void write_edge_list(std::ostream& out, const EdgeSubgraph& s);
Graph read_graph(std::istream& in);

// Tree: "k+1", then k lines "j parent(j)" for j = 1..k.
void write_tree(std::ostream& out, const RootedTree& t);
RootedTree read_tree(std::istream& in);

// Homomorphism: k+1 lines "j image(j)" for j = 0..k.
void write_homomorphism(std::ostream& out, const TreeHomomorphism& h);
TreeHomomorphism read_homomorphism(std::istream& in, std::size_t host_vertices);

// Trace: "start steps", then the steps+1 vertices W_0..W_steps, one per line.
void write_trace(std::ostream& out, const WalkTrace& trace);
WalkTrace read_trace(std::istream& in, std::size_t vertex_count);

/// Checks that consecutive trace vertices are adjacent in g.
bool trace_follows_graph(const Graph& g, const WalkTrace& trace);

/// Whole-file helpers; paths ending in ".gz" are gzip-compressed on write
/// and transparently decompressed on read.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

Graph load_graph(const std::string& path);
void save_graph(const std::string& path, const Graph& g);
RootedTree load_tree(const std::string& path);
void save_tree(const std::string& path, const RootedTree& t);
WalkTrace load_trace(const std::string& path, std::size_t vertex_count);
void save_trace(const std::string& path, const WalkTrace& trace);

}  // namespace qwalk
