// qwalk: generate graphs and trees, certify quasirandomness, run walks and
// seeded experiments. Exit status 0 = all checks pass, 1 = a check failed,
// 2 = usage or input error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwalk/certify.hpp"
#include "qwalk/experiment.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/io.hpp"
#include "qwalk/report.hpp"
#include "qwalk/tree.hpp"
#include "qwalk/walk.hpp"

namespace {

using nlohmann::json;
using namespace qwalk;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct OutputOptions {
    std::string out;
    std::string format = "json";
};

void add_output(CLI::App* cmd, OutputOptions& o, const char* out_help) {
    cmd->add_option("--out", o.out, out_help);
    cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "text"}));
}

std::string text_summary(const json& j, const std::string& prefix = "") {
    std::ostringstream s;
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            s << text_summary(value, prefix + key + ".");
        } else if (!value.is_array()) {
            s << prefix << key << " = " << value.dump() << '\n';
        }
    }
    return s.str();
}

// Writes the report to --out (with a one-line note on stdout) or to stdout.
void emit(const json& j, const OutputOptions& o) {
    const std::string body = o.format == "json" ? dump(j) : text_summary(j);
    if (o.out.empty()) {
        std::cout << body;
    } else {
        write_text_file(o.out, body);
        std::cout << "wrote " << o.out << '\n';
    }
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
    std::string kind = "gnp";
    std::size_t n = 100;
    double p = 0.5;
    double eps = 0.3;
    std::size_t degree = 4;
    std::size_t left = 3;
    std::size_t right = 3;
    Seed seed = 1;
    std::string out;
};

int run_generate(const GenerateArgs& a) {
    Graph g;
    if (a.kind == "gnp") g = gen_gnp(a.n, a.p, a.seed);
    else if (a.kind == "complete") g = gen_complete(a.n);
    else if (a.kind == "cycle") g = gen_cycle(a.n);
    else if (a.kind == "path") g = gen_path(a.n);
    else if (a.kind == "star") g = gen_star(a.n);
    else if (a.kind == "bipartite") g = gen_complete_bipartite(a.left, a.right);
    else if (a.kind == "two-clique") g = gen_two_clique_bridge(a.n, a.eps);
    else if (a.kind == "circulant") {
        if (a.degree % 2 != 0) throw UsageError("--degree must be even for circulant graphs");
        g = gen_circulant(a.n, a.degree / 2);
    }
    if (a.out.empty()) {
        write_graph(std::cout, g);
    } else {
        save_graph(a.out, g);
        std::cout << "wrote " << a.out << " (" << g.vertex_count() << " vertices, " << g.edge_count() << " edges)\n";
    }
    return kPass;
}

// ---------------------------------------------------------------------------
// certify

struct CertifyArgs {
    std::string graph;
    CertifyOptions options;
    bool skip_lambda = false;
    bool require = false;
    OutputOptions output;
};

int run_certify(CertifyArgs a) {
    const Graph g = load_graph(a.graph);
    a.options.estimate_lambda = !a.skip_lambda;
    const QuasirandomnessReport r = certify(g, a.options);
    json j = to_json(r);
    j["schema"] = kCertifySchema;
    j["code_version"] = QWALK_VERSION;
    j["graph"] = a.graph;
    j["seed"] = a.options.seed;
    j["quasirandom"] = r.discrepancy < r.eps_target;
    emit(j, a.output);
    return a.require && !(r.discrepancy < r.eps_target) ? kFail : kPass;
}

// ---------------------------------------------------------------------------
// walk

struct WalkArgs {
    std::string graph;
    std::optional<double> alpha;
    std::optional<Count> steps;
    std::optional<Vertex> start;
    double eps = 0.05;
    Seed seed = 1;
    std::string trace_out;
    std::string edges_out;
    OutputOptions output;
};

int run_walk_command(const WalkArgs& a) {
    const Graph g = load_graph(a.graph);
    const std::size_t n = g.vertex_count();
    if (a.alpha && a.steps) throw UsageError("give --alpha or --steps, not both");
    Count steps = 0;
    if (a.steps) steps = *a.steps;
    else if (a.alpha) {
        if (*a.alpha < 0.0) throw UsageError("--alpha must be non-negative");
        steps = static_cast<Count>(std::llround(*a.alpha * static_cast<double>(n) * static_cast<double>(n)));
    } else throw UsageError("one of --alpha or --steps is required");

    std::vector<std::string> warnings;
    Vertex start = 0;
    if (a.start) {
        if (*a.start >= n) throw UsageError("--start out of range");
        start = *a.start;
        if (!balanced_vertices(g, a.eps).balanced.contains(start)) {
            warnings.push_back("start vertex " + std::to_string(start) + " is not balanced");
        }
    } else {
        const auto v = lowest_balanced_vertex(g, a.eps);
        if (!v) throw UsageError("graph has no balanced vertex; pass --start");
        start = *v;
    }

    ListModel model(a.seed, n);
    const WalkTrace trace = run_walk(g, model, start, steps);
    const EdgeSubgraph walked = walk_subgraph(trace);
    if (!a.trace_out.empty()) save_trace(a.trace_out, trace);
    if (!a.edges_out.empty()) {
        std::ostringstream s;
        write_edge_list(s, walked);
        write_text_file(a.edges_out, s.str());
    }
    json j{{"schema", "qwalk.walk/1"},
           {"code_version", QWALK_VERSION},
           {"graph", a.graph},
           {"seed", a.seed},
           {"start", start},
           {"steps", steps},
           {"walk_edges", walked.size()},
           {"host_edges", g.edge_count()},
           {"warnings", warnings}};
    if (steps > 0) {
        const double rho = density(g);
        const double alpha = static_cast<double>(steps) / (static_cast<double>(n) * static_cast<double>(n));
        const SandwichBounds b = sandwich_bounds(trace, g);
        j["alpha"] = alpha;
        j["alpha_lo"] = b.alpha_lo;
        j["alpha_hi"] = b.alpha_hi;
        j["predicted_walk_edges"] = predicted_walk_edges(n, rho, alpha);
    }
    emit(j, a.output);
    return kPass;
}

// ---------------------------------------------------------------------------
// tree

struct TreeArgs {
    std::string kind = "random";
    std::size_t edges = 100;
    std::size_t max_degree = 4;
    std::size_t branching = 2;
    std::size_t depth = 2;
    Seed seed = 1;
    std::string tree_in;
    std::string tree_out;
    std::string graph;
    std::optional<Vertex> root;
    std::string hom_out;
    std::size_t piece_size = 0;
    OutputOptions output;
};

int run_tree(const TreeArgs& a) {
    RootedTree t;
    if (!a.tree_in.empty()) t = load_tree(a.tree_in);
    else if (a.kind == "path") t = gen_path_tree(a.edges);
    else if (a.kind == "nary") t = gen_nary_tree(a.branching, a.depth);
    else t = gen_random_tree(a.edges, a.max_degree, a.seed);
    if (!a.tree_out.empty()) save_tree(a.tree_out, t);

    json j{{"schema", "qwalk.tree/1"},
           {"code_version", QWALK_VERSION},
           {"seed", a.seed},
           {"tree_vertices", t.size()},
           {"tree_edges", t.edge_count()},
           {"max_degree", t.max_degree()}};
    if (a.piece_size > 0) {
        const TreeDecomposition d = decompose_tree(t, a.piece_size);
        json pieces = json::array();
        for (const TreePiece& p : d.pieces) pieces.push_back({{"root", p.root}, {"edges", p.edges.size()}});
        j["decomposition"] = {{"piece_size", a.piece_size}, {"pieces", pieces}};
    }
    if (!a.graph.empty()) {
        const Graph g = load_graph(a.graph);
        const Vertex root = a.root.value_or(0);
        if (root >= g.vertex_count()) throw UsageError("--root out of range");
        ListModel model(a.seed, g.vertex_count());
        const TreeHomomorphism h = random_homomorphism(g, t, model, root);
        if (!a.hom_out.empty()) {
            std::ostringstream s;
            write_homomorphism(s, h);
            write_text_file(a.hom_out, s.str());
        }
        j["root_image"] = root;
        j["image_edges"] = image_subgraph(t, h).size();
    }
    emit(j, a.output);
    return kPass;
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentArgs {
    std::string name;
    std::string config_path;
    std::optional<std::string> generator;
    std::optional<std::size_t> n;
    std::optional<double> p;
    std::optional<double> alpha;
    std::optional<double> eps;
    std::optional<std::size_t> trials;
    std::optional<Seed> seed;
    std::optional<Vertex> start;
    std::optional<std::string> graph;
    std::optional<std::size_t> sample_trials;
    std::optional<unsigned> refine_rounds;
    std::optional<std::string> tree;
    std::optional<std::size_t> max_degree;
    bool delta_sweep = false;
    std::vector<std::string> tolerances;
    unsigned workers = 0;
    OutputOptions output;
};

int run_experiment_command(const ExperimentArgs& a) {
    ExperimentConfig cfg;
    if (!a.config_path.empty()) {
        try {
            cfg = config_from_json(json::parse(read_text_file(a.config_path)));
        } catch (const json::parse_error& e) {
            throw UsageError("cannot parse " + a.config_path + ": " + e.what());
        }
    }
    if (!cfg.experiment.empty() && cfg.experiment != a.name) {
        throw UsageError("config names experiment \"" + cfg.experiment + "\" but \"" + a.name + "\" was requested");
    }
    cfg.experiment = a.name;
    if (a.generator) cfg.generator = *a.generator;
    if (a.n) cfg.n = *a.n;
    if (a.p) cfg.p = *a.p;
    if (a.alpha) cfg.alpha = *a.alpha;
    if (a.eps) cfg.eps = *a.eps;
    if (a.trials) cfg.trials = *a.trials;
    if (a.seed) cfg.seed = *a.seed;
    if (a.start) cfg.start = *a.start;
    if (a.graph) {
        cfg.graph_path = *a.graph;
        if (!a.generator) cfg.generator = "file";
    }
    if (a.sample_trials) cfg.sample_trials = *a.sample_trials;
    if (a.refine_rounds) cfg.refine_rounds = *a.refine_rounds;
    if (a.tree) cfg.tree = *a.tree;
    if (a.max_degree) cfg.max_degree = *a.max_degree;
    if (a.delta_sweep) cfg.delta_sweep = true;
    for (const std::string& item : a.tolerances) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--tol expects key=value, got " + item);
        std::size_t used = 0;
        const double value = std::stod(item.substr(eq + 1), &used);
        if (used != item.size() - eq - 1) throw std::invalid_argument("--tol value is not a number: " + item);
        cfg.tolerances[item.substr(0, eq)] = value;
    }
    cfg.workers = a.workers;

    const ExperimentReport report = run_experiment(cfg);
    emit(to_json(report), a.output);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    for (const Check& c : report.checks) {
        if (!c.pass) {
            std::cerr << "check failed: " << c.name << " = " << c.value << " (want " << c.relation << ' ' << c.threshold
                      << ")\n";
        }
    }
    return report.passed() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random walks on quasirandom graphs: generators, certification and experiments"};
    app.set_version_flag("--version", std::string(QWALK_VERSION));
    app.require_subcommand(1);
    int status = kPass;

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a generated graph as an edge list");
    generate->add_option("--kind", gen.kind, "Graph family")
        ->check(CLI::IsMember({"gnp", "complete", "cycle", "path", "star", "bipartite", "two-clique", "circulant"}));
    generate->add_option("--n", gen.n, "Vertex count (leaf count for star)");
    generate->add_option("--p", gen.p, "Edge probability for gnp")->check(CLI::Range(0.0, 1.0));
    generate->add_option("--eps", gen.eps, "Small-clique parameter for two-clique");
    generate->add_option("--degree", gen.degree, "Even degree for circulant");
    generate->add_option("--left", gen.left, "Left side of the complete bipartite graph");
    generate->add_option("--right", gen.right, "Right side of the complete bipartite graph");
    generate->add_option("--seed", gen.seed, "RNG seed");
    generate->add_option("--out", gen.out, "Output path (.gz compresses); stdout if omitted");
    generate->callback([&] { status = run_generate(gen); });

    CertifyArgs cert;
    auto* certify_cmd = app.add_subcommand("certify", "Discrepancy and spectral certificates for a graph");
    certify_cmd->add_option("--graph", cert.graph, "Edge-list file")->required();
    certify_cmd->add_option("--eps", cert.options.eps, "Target epsilon")->check(CLI::Range(0.0, 1.0));
    certify_cmd->add_option("--trials", cert.options.trials, "Sampled discrepancy trials");
    certify_cmd->add_option("--seed", cert.options.seed, "RNG seed");
    certify_cmd->add_option("--refine", cert.options.refine_rounds, "Best-response refinement rounds per trial");
    certify_cmd->add_flag("--exhaustive", cert.options.exhaustive, "Exact discrepancy (n <= 16)");
    certify_cmd->add_flag("--no-lambda", cert.skip_lambda, "Skip the power-iteration eigenvalue estimate");
    certify_cmd->add_flag("--require", cert.require, "Exit 1 unless discrepancy < eps");
    certify_cmd->add_option("--workers", cert.options.workers, "Worker threads (0 = hardware)");
    add_output(certify_cmd, cert.output, "Report path");
    certify_cmd->callback([&] { status = run_certify(cert); });

    WalkArgs walk;
    auto* walk_cmd = app.add_subcommand("walk", "Run one list-model walk");
    walk_cmd->add_option("--graph", walk.graph, "Edge-list file")->required();
    walk_cmd->add_option("--alpha", walk.alpha, "Walk length alpha n^2");
    walk_cmd->add_option("--steps", walk.steps, "Walk length in steps");
    walk_cmd->add_option("--start", walk.start, "Start vertex (default: lowest balanced vertex)");
    walk_cmd->add_option("--eps", walk.eps, "Balance tolerance for the start vertex");
    walk_cmd->add_option("--seed", walk.seed, "List model seed");
    walk_cmd->add_option("--trace-out", walk.trace_out, "Write W_0..W_l");
    walk_cmd->add_option("--edges-out", walk.edges_out, "Write the walk subgraph");
    add_output(walk_cmd, walk.output, "Summary path");
    walk_cmd->callback([&] { status = run_walk_command(walk); });

    TreeArgs tree;
    auto* tree_cmd = app.add_subcommand("tree", "Generate, decompose and embed rooted trees");
    tree_cmd->add_option("--kind", tree.kind, "Tree family")->check(CLI::IsMember({"path", "nary", "random"}));
    tree_cmd->add_option("--edges", tree.edges, "Edge count (path, random)");
    tree_cmd->add_option("--max-degree", tree.max_degree, "Degree cap (random)");
    tree_cmd->add_option("--branching", tree.branching, "Children per vertex (nary)");
    tree_cmd->add_option("--depth", tree.depth, "Depth (nary)");
    tree_cmd->add_option("--seed", tree.seed, "RNG seed");
    tree_cmd->add_option("--tree", tree.tree_in, "Read the tree from a file instead");
    tree_cmd->add_option("--tree-out", tree.tree_out, "Write the tree");
    tree_cmd->add_option("--decompose", tree.piece_size, "Split into pieces of L to 3L edges");
    tree_cmd->add_option("--graph", tree.graph, "Host graph for a random homomorphism");
    tree_cmd->add_option("--root", tree.root, "Image of the tree root");
    tree_cmd->add_option("--hom-out", tree.hom_out, "Write the homomorphism");
    add_output(tree_cmd, tree.output, "Summary path");
    tree_cmd->callback([&] { status = run_tree(tree); });

    ExperimentArgs exp;
    auto* exp_cmd = app.add_subcommand("experiment", "Run a seeded experiment and write its JSON report");
    exp_cmd->add_option("name", exp.name, "Experiment")->required()->check(CLI::IsMember(experiment_names()));
    exp_cmd->add_option("--config", exp.config_path, "JSON config; flags override it");
    exp_cmd->add_option("--generator", exp.generator, "Host family")
        ->check(CLI::IsMember({"gnp", "complete", "two-clique", "circulant", "file"}));
    exp_cmd->add_option("--graph", exp.graph, "Host edge-list file");
    exp_cmd->add_option("--n", exp.n, "Host vertex count");
    exp_cmd->add_option("--p", exp.p, "Host edge probability")->check(CLI::Range(0.0, 1.0));
    exp_cmd->add_option("--alpha", exp.alpha, "Walk length alpha n^2");
    exp_cmd->add_option("--eps", exp.eps, "Epsilon")->check(CLI::Range(0.0, 1.0));
    exp_cmd->add_option("--trials", exp.trials, "Trials (walks for mixing)");
    exp_cmd->add_option("--seed", exp.seed, "Master seed");
    exp_cmd->add_option("--start", exp.start, "Start vertex / root image");
    exp_cmd->add_option("--sample-trials", exp.sample_trials, "Sampled discrepancy trials");
    exp_cmd->add_option("--refine", exp.refine_rounds, "Best-response refinement rounds");
    exp_cmd->add_option("--tree", exp.tree, "Tree family for tree-embedding")
        ->check(CLI::IsMember({"path", "nary", "random"}));
    exp_cmd->add_option("--max-degree", exp.max_degree, "Degree cap for random trees");
    exp_cmd->add_flag("--delta-sweep", exp.delta_sweep, "Report-only sweep over the tree degree cap");
    exp_cmd->add_option("--tol", exp.tolerances, "Override a tolerance, e.g. --tol tv_max=0.04")->allow_extra_args(false);
    exp_cmd->add_option("--workers", exp.workers, "Worker threads (0 = hardware)");
    add_output(exp_cmd, exp.output, "Report path");
    exp_cmd->callback([&] { status = run_experiment_command(exp); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return status;
}
