#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qwalk/certify.hpp"
#include "qwalk/experiment.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/report.hpp"
#include "qwalk/tree.hpp"
#include "qwalk/walk.hpp"

namespace py = pybind11;
using namespace qwalk;

namespace {

std::vector<std::pair<Vertex, Vertex>> edge_pairs(const std::vector<Edge>& edges) {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edges.size());
    for (const Edge& e : edges) out.emplace_back(e.u, e.v);
    return out;
}

std::vector<Edge> to_edges(const std::vector<std::pair<Vertex, Vertex>>& pairs) {
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (const auto& [u, v] : pairs) edges.emplace_back(u, v);
    return edges;
}

py::dict discrepancy_dict(const DiscrepancyResult& r) {
    py::dict d;
    d["deviation"] = r.deviation;
    d["a"] = r.a.members();
    d["b"] = r.b.members();
    d["pairs_checked"] = r.pairs_checked;
    d["method"] = to_string(r.method);
    return d;
}

void bind_graph(py::module_& m) {
    py::class_<Graph>(m, "Graph")
        .def(py::init([](std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
                 return Graph::from_edges(n, to_edges(edges));
             }),
             py::arg("n"), py::arg("edges"))
        .def_property_readonly("vertex_count", &Graph::vertex_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def("degree", &Graph::degree)
        .def("neighbors", [](const Graph& g, Vertex v) {
            const auto nb = g.neighbors(v);
            return std::vector<Vertex>(nb.begin(), nb.end());
        })
        .def("has_edge", &Graph::has_edge)
        .def("edges", [](const Graph& g) { return edge_pairs(g.edges()); })
        .def("__len__", &Graph::vertex_count)
        .def("__repr__", [](const Graph& g) {
            return "<qwalk.Graph n=" + std::to_string(g.vertex_count()) + " m=" + std::to_string(g.edge_count()) + ">";
        });

    m.def("gen_gnp", &gen_gnp, py::arg("n"), py::arg("p"), py::arg("seed"));
    m.def("gen_complete", &gen_complete);
    m.def("gen_cycle", &gen_cycle);
    m.def("gen_path", &gen_path);
    m.def("gen_star", &gen_star);
    m.def("gen_complete_bipartite", &gen_complete_bipartite);
    m.def("gen_circulant", &gen_circulant, py::arg("n"), py::arg("k"));
    m.def("gen_two_clique_bridge", &gen_two_clique_bridge, py::arg("n"), py::arg("eps"));
    m.def("density", &density);
    m.def("is_connected", &is_connected);
    m.def("is_bipartite", &is_bipartite);
    m.def("lowest_balanced_vertex", &lowest_balanced_vertex, py::arg("g"), py::arg("eps"));
}

void bind_certify(py::module_& m) {
    m.def("discrepancy_exhaustive",
          [](const Graph& g, double eps) { return discrepancy_dict(discrepancy_exhaustive(g, eps)); }, py::arg("g"),
          py::arg("eps"));
    m.def(
        "discrepancy_sampled",
        [](const Graph& g, double eps, std::size_t trials, Seed seed, unsigned refine_rounds) {
            DiscrepancyResult r;
            {
                py::gil_scoped_release release;
                r = discrepancy_sampled(g, eps, {trials, seed, refine_rounds, 0});
            }
            return discrepancy_dict(r);
        },
        py::arg("g"), py::arg("eps"), py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("refine_rounds") = 0);
    m.def("count_c4_labelled", &count_c4_labelled);
    m.def("trace_p4", &trace_p4);
    m.def("lambda_bound", [](const Graph& g) { return lambda_bound_from_trace(g).value; });
    m.def("lambda_estimate", &lambda_estimate, py::arg("g"), py::arg("tol") = 1e-10, py::arg("max_iter") = 100000);
    m.def(
        "certify",
        [](const Graph& g, double eps, std::size_t trials, Seed seed, bool exhaustive) {
            CertifyOptions o;
            o.eps = eps;
            o.trials = trials;
            o.seed = seed;
            o.exhaustive = exhaustive;
            return to_json(certify(g, o)).dump();
        },
        py::arg("g"), py::arg("eps") = 0.1, py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("exhaustive") = false);
}

void bind_walk(py::module_& m) {
    py::class_<ListModel>(m, "ListModel")
        .def(py::init<Seed, std::size_t>(), py::arg("seed"), py::arg("vertex_count"))
        .def_property_readonly("seed", &ListModel::seed)
        .def("entry", &ListModel::entry, py::arg("g"), py::arg("v"), py::arg("j"))
        .def("consumed", &ListModel::consumed);

    py::class_<WalkTrace>(m, "WalkTrace")
        .def_readonly("start", &WalkTrace::start)
        .def_readonly("steps", &WalkTrace::steps)
        .def_readonly("sequence", &WalkTrace::sequence)
        .def_readonly("visit_counts", &WalkTrace::visit_counts);

    m.def("run_walk", &run_walk, py::arg("g"), py::arg("model"), py::arg("start"), py::arg("steps"));
    m.def("walk_subgraph", [](const WalkTrace& t) { return edge_pairs(walk_subgraph(t).edges()); });
    m.def(
        "list_subgraph",
        [](const Graph& g, const ListModel& model, double alpha) { return edge_pairs(list_subgraph(g, model, alpha).edges()); },
        py::arg("g"), py::arg("model"), py::arg("alpha"));
    m.def("retention_probability", &retention_probability, py::arg("g"), py::arg("u"), py::arg("v"), py::arg("alpha"));
    m.def("sandwich_bounds", [](const WalkTrace& t, const Graph& g) {
        const SandwichBounds b = sandwich_bounds(t, g);
        return std::pair{b.alpha_lo, b.alpha_hi};
    });
    m.def("stationary", [](const Graph& g) { return stationary(g).probabilities(); });
}

void bind_tree(py::module_& m) {
    py::class_<RootedTree>(m, "RootedTree")
        .def(py::init([](const std::vector<std::int64_t>& parents) { return build_tree(parents); }), py::arg("parents"))
        .def_property_readonly("size", &RootedTree::size)
        .def_property_readonly("edge_count", &RootedTree::edge_count)
        .def_property_readonly("max_degree", &RootedTree::max_degree)
        .def("parent", [](const RootedTree& t, Vertex j) -> std::optional<Vertex> {
            if (j >= t.size()) throw py::index_error("tree vertex out of range");
            if (j == 0) return std::nullopt;
            return t.parent(j);
        });

    m.def("gen_path_tree", &gen_path_tree);
    m.def("gen_nary_tree", &gen_nary_tree, py::arg("branching"), py::arg("depth"));
    m.def("gen_random_tree", &gen_random_tree, py::arg("edges"), py::arg("max_degree"), py::arg("seed"));
    m.def(
        "random_homomorphism",
        [](const Graph& g, const RootedTree& t, ListModel& model, Vertex root) {
            return random_homomorphism(g, t, model, root).image;
        },
        py::arg("g"), py::arg("tree"), py::arg("model"), py::arg("root_image"));
    m.def(
        "decompose_tree",
        [](const RootedTree& t, std::size_t piece_size) {
            std::vector<std::pair<Vertex, std::vector<Vertex>>> out;
            for (auto& p : decompose_tree(t, piece_size).pieces) out.emplace_back(p.root, std::move(p.edges));
            return out;
        },
        py::arg("tree"), py::arg("piece_size"));
}

}  // namespace

PYBIND11_MODULE(_qwalk, m) {
    m.doc() = "Random walks on quasirandom graphs";
    m.attr("__version__") = QWALK_VERSION;

    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    bind_graph(m);
    bind_certify(m);
    bind_walk(m);
    bind_tree(m);

    m.def("experiment_names", &experiment_names);
    m.def("_run_experiment", [](const std::string& config_json) {
        const ExperimentConfig cfg = config_from_json(nlohmann::json::parse(config_json));
        ExperimentReport report;
        {
            py::gil_scoped_release release;
            report = run_experiment(cfg);
        }
        return to_json(report).dump();
    });
}
