#include "qwalk/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace qwalk {

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::size_t line() const noexcept { return line_; }

    // Next non-blank line split into unsigned integers; false at end of input.
    bool next(std::vector<std::uint64_t>& fields) {
        std::string text;
        while (std::getline(in_, text)) {
            ++line_;
            fields.clear();
            const char* p = text.data();
            const char* end = p + text.size();
            while (p < end) {
                while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
                if (p == end) break;
                std::uint64_t value = 0;
                const auto [ptr, ec] = std::from_chars(p, end, value);
                if (ec != std::errc() || (ptr < end && *ptr != ' ' && *ptr != '\t' && *ptr != '\r')) {
                    throw ParseError(line_, "expected non-negative integers, got \"" + text + "\"");
                }
                fields.push_back(value);
                p = ptr;
            }
            if (!fields.empty()) return true;
        }
        return false;
    }

    void expect(std::vector<std::uint64_t>& fields, std::size_t count, const char* what) {
        if (!next(fields)) throw ParseError(line_ + 1, std::string("unexpected end of file, expected ") + what);
        if (fields.size() != count) {
            throw ParseError(line_, "expected " + std::to_string(count) + " fields (" + what + "), got " +
                                        std::to_string(fields.size()));
        }
    }

    void expect_end() {
        std::vector<std::uint64_t> fields;
        if (next(fields)) throw ParseError(line_, "unexpected trailing data");
    }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_graph(std::ostream& out, const Graph& g) {
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list(std::ostream& out, const EdgeSubgraph& s) {
    out << s.parent_vertices() << ' ' << s.size() << '\n';
    for (const Edge& e : s.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph read_graph(std::istream& in) {
    LineReader reader(in);
    std::vector<std::uint64_t> f;
    reader.expect(f, 2, "header \"n m\"");
    const std::uint64_t n = f[0];
    const std::uint64_t m = f[1];
    if (n > (std::uint64_t{1} << 31)) throw ParseError(reader.line(), "vertex count too large");
    if (n >= 2 && m > n * (n - 1) / 2) throw ParseError(reader.line(), "more edges than vertex pairs");
    if (n < 2 && m > 0) throw ParseError(reader.line(), "more edges than vertex pairs");

    std::vector<Edge> edges;
    std::vector<std::size_t> lines;
    edges.reserve(m);
    lines.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        reader.expect(f, 2, "edge \"u v\"");
        if (f[0] >= f[1]) throw ParseError(reader.line(), "edge endpoints must satisfy u < v");
        if (f[1] >= n) throw ParseError(reader.line(), "vertex " + std::to_string(f[1]) + " out of range");
        edges.emplace_back(static_cast<Vertex>(f[0]), static_cast<Vertex>(f[1]));
        lines.push_back(reader.line());
    }
    reader.expect_end();
    std::vector<Edge> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    if (const auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
        // Report the line of the second occurrence.
        std::size_t seen = 0;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (edges[i] == *dup && ++seen == 2) {
                throw ParseError(lines[i], "duplicate edge " + std::to_string(dup->u) + " " + std::to_string(dup->v));
            }
        }
    }
    return Graph::from_edges(n, edges);
}

void write_tree(std::ostream& out, const RootedTree& t) {
    out << t.size() << '\n';
    for (Vertex j = 1; j < t.size(); ++j) out << j << ' ' << t.parent(j) << '\n';
}

RootedTree read_tree(std::istream& in) {
    LineReader reader(in);
    std::vector<std::uint64_t> f;
    reader.expect(f, 1, "header \"k+1\"");
    const std::uint64_t size = f[0];
    if (size == 0) throw ParseError(reader.line(), "a tree needs at least one vertex");
    if (size > (std::uint64_t{1} << 31)) throw ParseError(reader.line(), "tree too large");
    std::vector<Vertex> parents(size, RootedTree::kNoParent);
    for (std::uint64_t i = 1; i < size; ++i) {
        reader.expect(f, 2, "\"j parent(j)\"");
        const std::uint64_t j = f[0];
        if (j == 0 || j >= size) throw ParseError(reader.line(), "vertex index " + std::to_string(j) + " out of range");
        if (parents[j] != RootedTree::kNoParent) throw ParseError(reader.line(), "vertex " + std::to_string(j) + " listed twice");
        if (f[1] >= j) throw ParseError(reader.line(), "parent of v_" + std::to_string(j) + " must precede it");
        parents[j] = static_cast<Vertex>(f[1]);
    }
    reader.expect_end();
    return RootedTree(std::move(parents));
}

void write_homomorphism(std::ostream& out, const TreeHomomorphism& h) {
    for (std::size_t j = 0; j < h.image.size(); ++j) out << j << ' ' << h.image[j] << '\n';
}

TreeHomomorphism read_homomorphism(std::istream& in, std::size_t host_vertices) {
    LineReader reader(in);
    std::vector<std::uint64_t> f;
    TreeHomomorphism h;
    h.host_vertices = host_vertices;
    while (reader.next(f)) {
        if (f.size() != 2) throw ParseError(reader.line(), "expected \"j image(j)\"");
        if (f[0] != h.image.size()) throw ParseError(reader.line(), "expected index " + std::to_string(h.image.size()));
        if (f[1] >= host_vertices) throw ParseError(reader.line(), "image vertex out of range");
        h.image.push_back(static_cast<Vertex>(f[1]));
    }
    if (h.image.empty()) throw ParseError(reader.line() + 1, "empty homomorphism");
    return h;
}

void write_trace(std::ostream& out, const WalkTrace& trace) {
    out << trace.start << ' ' << trace.steps << '\n';
    for (Vertex v : trace.sequence) out << v << '\n';
}

WalkTrace read_trace(std::istream& in, std::size_t vertex_count) {
    LineReader reader(in);
    std::vector<std::uint64_t> f;
    reader.expect(f, 2, "header \"start steps\"");
    WalkTrace trace;
    if (f[0] >= vertex_count) throw ParseError(reader.line(), "start vertex out of range");
    trace.start = static_cast<Vertex>(f[0]);
    trace.steps = f[1];
    trace.visit_counts.assign(vertex_count, 0);
    trace.sequence.reserve(std::min<Count>(trace.steps + 1, Count{1} << 24));
    for (Count i = 0; i <= trace.steps; ++i) {
        reader.expect(f, 1, "vertex");
        if (f[0] >= vertex_count) throw ParseError(reader.line(), "vertex " + std::to_string(f[0]) + " out of range");
        if (i == 0 && f[0] != trace.start) throw ParseError(reader.line(), "W_0 differs from the header's start");
        trace.sequence.push_back(static_cast<Vertex>(f[0]));
        if (i < trace.steps) ++trace.visit_counts[f[0]];
    }
    reader.expect_end();
    return trace;
}

bool trace_follows_graph(const Graph& g, const WalkTrace& trace) {
    if (trace.vertex_count() != g.vertex_count() || trace.sequence.size() != trace.steps + 1) return false;
    for (std::size_t i = 0; i + 1 < trace.sequence.size(); ++i) {
        if (!g.has_edge(trace.sequence[i], trace.sequence[i + 1])) return false;
    }
    return true;
}

std::string read_text_file(const std::string& path) {
    gzFile file = gzopen(path.c_str(), "rb");
    if (file == nullptr) throw std::runtime_error("cannot open " + path);
    std::string content;
    char buffer[1 << 16];
    int got = 0;
    while ((got = gzread(file, buffer, sizeof buffer)) > 0) content.append(buffer, static_cast<std::size_t>(got));
    const bool failed = got < 0;
    gzclose(file);
    if (failed) throw std::runtime_error("read error in " + path);
    return content;
}

void write_text_file(const std::string& path, const std::string& content) {
    if (ends_with(path, ".gz")) {
        gzFile file = gzopen(path.c_str(), "wb");
        if (file == nullptr) throw std::runtime_error("cannot write " + path);
        const int wrote = content.empty() ? 0 : gzwrite(file, content.data(), static_cast<unsigned>(content.size()));
        gzclose(file);
        if (static_cast<std::size_t>(wrote) != content.size()) throw std::runtime_error("write error in " + path);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write error in " + path);
}

Graph load_graph(const std::string& path) {
    std::istringstream in(read_text_file(path));
    return read_graph(in);
}

void save_graph(const std::string& path, const Graph& g) {
    std::ostringstream out;
    write_graph(out, g);
    write_text_file(path, out.str());
}

RootedTree load_tree(const std::string& path) {
    std::istringstream in(read_text_file(path));
    return read_tree(in);
}

void save_tree(const std::string& path, const RootedTree& t) {
    std::ostringstream out;
    write_tree(out, t);
    write_text_file(path, out.str());
}

WalkTrace load_trace(const std::string& path, std::size_t vertex_count) {
    std::istringstream in(read_text_file(path));
    return read_trace(in, vertex_count);
}

void save_trace(const std::string& path, const WalkTrace& trace) {
    std::ostringstream out;
    write_trace(out, trace);
    write_text_file(path, out.str());
}

}  // namespace qwalk
