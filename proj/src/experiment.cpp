#include "qwalk/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "qwalk/certify.hpp"
#include "qwalk/io.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/tree.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

using nlohmann::json;

namespace {

struct ExperimentDefaults {
    const char* generator;
    std::size_t n;
    double alpha;
    double eps;
    std::size_t trials;
    std::size_t sample_trials;
    unsigned refine_rounds;
    std::map<std::string, double> tolerances;
};

// Pathology alpha comes from a calibration scan over alpha in {0.05, ..., 0.5}
// on two_clique_bridge(600, 0.3): 0.3 gives a crossing rate near 0.22.
const std::map<std::string, ExperimentDefaults>& defaults_table() {
    static const std::map<std::string, ExperimentDefaults> table = {
        {"density", {"gnp", 2000, 0.5, 0.05, 10, 0, 0, {{"density_rel_tol", 0.015}}}},
        {"visits", {"gnp", 1000, 0.5, 0.05, 5, 0, 0, {{"visit_rel_tol", 0.10}, {"visit_min_fraction", 0.99}}}},
        {"preservation",
         {"gnp", 1000, 0.5, 0.05, 5, 2000, 0, {{"preservation_tol", 0.02}, {"density_rel_tol", 0.015}}}},
        {"pathology",
         {"two-clique", 600, 0.3, 0.3, 200, 0, 0, {{"crossing_p_lo", 0.05}, {"crossing_p_hi", 0.95}, {"mean_gap_se", 2.0}}}},
        {"mixing", {"gnp", 300, 0.0, 0.05, 100000, 0, 0, {{"tv_max", 0.05}, {"monotone_se", 2.0}}}},
        {"tree-counterexample", {"complete", 2000, 0.25, 0.1, 5, 200, 2, {{"image_rel_tol", 0.03}}}},
        {"tree-embedding",
         {"gnp", 1000, 0.3, 0.05, 5, 2000, 0, {{"density_rel_tol", 0.015}, {"preservation_tol", 0.02}}}},
    };
    return table;
}

double tolerance(const ExperimentConfig& cfg, const std::string& name) {
    const auto it = cfg.tolerances.find(name);
    if (it == cfg.tolerances.end()) throw ExperimentError("missing tolerance \"" + name + "\"");
    return it->second;
}

Check make_check(std::string name, double value, const std::string& relation, double threshold) {
    Check c{std::move(name), value, threshold, relation, false};
    if (relation == "<") c.pass = value < threshold;
    else if (relation == "<=") c.pass = value <= threshold;
    else if (relation == ">") c.pass = value > threshold;
    else if (relation == ">=") c.pass = value >= threshold;
    else if (relation == "==") c.pass = value == threshold;
    else throw std::logic_error("unknown relation " + relation);
    return c;
}

Count walk_steps(std::size_t n, double alpha) {
    if (!(alpha >= 0.0)) throw ExperimentError("alpha must be non-negative");
    return static_cast<Count>(std::llround(alpha * static_cast<double>(n) * static_cast<double>(n)));
}

Vertex resolve_start(const Graph& g, const ExperimentConfig& cfg, ExperimentReport& report) {
    const double eps = *cfg.eps;
    if (cfg.start) {
        if (*cfg.start >= g.vertex_count()) throw ExperimentError("start vertex out of range");
        if (!balanced_vertices(g, eps).balanced.contains(*cfg.start)) {
            report.warnings.push_back("start vertex " + std::to_string(*cfg.start) + " is not balanced");
        }
        return *cfg.start;
    }
    const auto v = lowest_balanced_vertex(g, eps);
    if (!v) throw ExperimentError("host has no balanced vertex for eps = " + std::to_string(eps));
    return *v;
}

void require_connected(const Graph& g) {
    if (!is_connected(g)) throw ExperimentError("host graph is disconnected");
}

double relative_error(double observed, double predicted) {
    if (predicted == 0.0) return std::abs(observed);
    return std::abs(observed / predicted - 1.0);
}

template <class Fn>
std::vector<TrialRecord> run_trials(std::size_t trials, unsigned workers, Fn&& fn) {
    std::vector<TrialRecord> records(trials);
    parallel_for(trials, [&](std::size_t t) { records[t] = fn(t); }, workers);
    return records;
}

double column_max(const std::vector<TrialRecord>& rows, const std::string& key) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& r : rows) best = std::max(best, r.at(key));
    return best;
}

double column_min(const std::vector<TrialRecord>& rows, const std::string& key) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) best = std::min(best, r.at(key));
    return best;
}

double column_mean(const std::vector<TrialRecord>& rows, const std::string& key) {
    double total = 0.0;
    for (const auto& r : rows) total += r.at(key);
    return rows.empty() ? 0.0 : total / static_cast<double>(rows.size());
}

SampledDiscrepancyOptions sampling(const ExperimentConfig& cfg) {
    return {*cfg.sample_trials, derive_seed(cfg.seed, 0, kSampleStream), *cfg.refine_rounds, 1};
}

const std::string kWalkEdgesReference = "(1 - exp(-2 alpha / rho)) * rho * C(n, 2) edges in the walk subgraph";

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"density",   "visits", "preservation",        "pathology",
                                                   "mixing",    "tree-counterexample", "tree-embedding"};
    return names;
}

ExperimentConfig with_defaults(ExperimentConfig cfg) {
    const auto& table = defaults_table();
    const auto it = table.find(cfg.experiment);
    if (it == table.end()) throw ExperimentError("unknown experiment \"" + cfg.experiment + "\"");
    const ExperimentDefaults& d = it->second;
    if (!cfg.generator) cfg.generator = d.generator;
    if (!cfg.n) cfg.n = d.n;
    if (!cfg.alpha) cfg.alpha = d.alpha;
    if (!cfg.eps) cfg.eps = d.eps;
    if (!cfg.trials) cfg.trials = d.trials;
    if (!cfg.sample_trials) cfg.sample_trials = d.sample_trials;
    if (!cfg.refine_rounds) cfg.refine_rounds = d.refine_rounds;
    for (const auto& [name, value] : d.tolerances) cfg.tolerances.emplace(name, value);

    if (!(*cfg.eps > 0.0 && *cfg.eps < 1.0)) throw ExperimentError("eps must lie in (0, 1)");
    if (!(*cfg.alpha >= 0.0)) throw ExperimentError("alpha must be non-negative");
    if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw ExperimentError("p must lie in [0, 1]");
    if (*cfg.trials == 0) throw ExperimentError("trials must be at least 1");
    return cfg;
}

Aggregate aggregate(const std::vector<double>& values) {
    Aggregate a;
    a.count = values.size();
    if (values.empty()) return a;
    a.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    a.min = *lo;
    a.max = *hi;
    constexpr std::size_t kBins = 10;
    a.histogram.lo = a.min;
    a.histogram.hi = a.max;
    a.histogram.counts.assign(kBins, 0);
    const double width = (a.max - a.min) / static_cast<double>(kBins);
    for (double v : values) {
        std::size_t bin = width > 0.0 ? static_cast<std::size_t>((v - a.min) / width) : 0;
        ++a.histogram.counts[std::min(bin, kBins - 1)];
    }
    return a;
}

bool ExperimentReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void fill_aggregates(ExperimentReport& report) {
    report.aggregates.clear();
    if (report.trials.empty()) return;
    for (const auto& [key, unused] : report.trials.front()) {
        std::vector<double> column;
        bool everywhere = true;
        for (const auto& row : report.trials) {
            const auto it = row.find(key);
            if (it == row.end()) {
                everywhere = false;
                break;
            }
            column.push_back(it->second);
        }
        if (everywhere) report.aggregates[key] = aggregate(column);
    }
}

double predicted_walk_edges(std::size_t n, double rho, double alpha) {
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    if (rho <= 0.0) return 0.0;
    return (1.0 - std::exp(-2.0 * alpha / rho)) * rho * pairs;
}

double predicted_distinct_images(std::size_t n, std::size_t draws) {
    const double choices = static_cast<double>(n - 1);
    return choices * (1.0 - std::pow(1.0 - 1.0 / choices, static_cast<double>(draws)));
}

Graph make_host(const ExperimentConfig& cfg) {
    const std::string& kind = cfg.generator.value_or("gnp");
    const std::size_t n = cfg.n.value_or(1000);
    if (kind == "gnp") return gen_gnp(n, cfg.p, derive_seed(cfg.seed, 0, kHostStream));
    if (kind == "complete") return gen_complete(n);
    if (kind == "two-clique") return gen_two_clique_bridge(n, cfg.generator_eps);
    if (kind == "circulant") {
        if (cfg.degree % 2 != 0 || cfg.degree >= n) throw ExperimentError("circulant degree must be even and below n");
        return gen_circulant(n, cfg.degree / 2);
    }
    if (kind == "file") {
        if (cfg.graph_path.empty()) throw ExperimentError("generator \"file\" needs graph_path");
        return load_graph(cfg.graph_path);
    }
    throw ExperimentError("unknown generator \"" + kind + "\"");
}

// ---------------------------------------------------------------------------

ExperimentReport exp_density(const ExperimentConfig& input) {
    ExperimentReport report;
    report.config = with_defaults(input);
    const ExperimentConfig& cfg = report.config;
    const Graph g = make_host(cfg);
    require_connected(g);
    const Vertex start = resolve_start(g, cfg, report);
    const double rho = density(g);
    const Count steps = walk_steps(g.vertex_count(), *cfg.alpha);

    report.trials = run_trials(*cfg.trials, cfg.workers, [&](std::size_t t) {
        ListModel model(derive_seed(cfg.seed, t, kWalkStream), g.vertex_count());
        const WalkTrace trace = run_walk(g, model, start, steps);
        const SandwichBounds bounds = sandwich_bounds(trace, g);
        return TrialRecord{{"edges", static_cast<double>(walk_subgraph(trace).size())},
                           {"alpha_lo", bounds.alpha_lo},
                           {"alpha_hi", bounds.alpha_hi}};
    });
    fill_aggregates(report);

    const double predicted = predicted_walk_edges(g.vertex_count(), rho, *cfg.alpha);
    report.predicted = Prediction{predicted, kWalkEdgesReference};
    report.checks.push_back(make_check("mean_edges_rel_error", relative_error(column_mean(report.trials, "edges"), predicted),
                                       "<=", tolerance(cfg, "density_rel_tol")));
    report.extra_json = json{{"rho", rho}, {"start", start}, {"steps", steps}, {"host_edges", g.edge_count()}}.dump();
    return report;
}

ExperimentReport exp_visits(const ExperimentConfig& input) {
    ExperimentReport report;
    report.config = with_defaults(input);
    const ExperimentConfig& cfg = report.config;
    const Graph g = make_host(cfg);
    require_connected(g);
    const Vertex start = resolve_start(g, cfg, report);
    const double rho = density(g);
    const double alpha = *cfg.alpha;
    const Count steps = walk_steps(g.vertex_count(), alpha);
    const double band = tolerance(cfg, "visit_rel_tol");

    std::vector<std::vector<double>> deviations(*cfg.trials);
    report.trials = run_trials(*cfg.trials, cfg.workers, [&](std::size_t t) {
        ListModel model(derive_seed(cfg.seed, t, kWalkStream), g.vertex_count());
        const WalkTrace trace = run_walk(g, model, start, steps);
        std::vector<double>& dev = deviations[t];
        std::size_t within = 0;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            const double expected = alpha / rho * static_cast<double>(g.degree(v));
            const double observed = static_cast<double>(trace.visit_counts[v]);
            const double r = expected > 0.0 ? std::abs(observed / expected - 1.0) : (observed > 0.0 ? 1.0 : 0.0);
            dev.push_back(r);
            if (r <= band) ++within;
        }
        const double n = static_cast<double>(g.vertex_count());
        return TrialRecord{{"fraction_within", static_cast<double>(within) / n},
                           {"max_rel_dev", *std::max_element(dev.begin(), dev.end())},
                           {"mean_rel_dev", std::accumulate(dev.begin(), dev.end(), 0.0) / n}};
    });
    fill_aggregates(report);

    report.predicted = Prediction{alpha / rho, "X_v = (alpha / rho) * d(v) visits per vertex"};
    report.checks.push_back(make_check("min_fraction_within", column_min(report.trials, "fraction_within"), ">=",
                                       tolerance(cfg, "visit_min_fraction")));

    // Concentration radius sqrt(8 ln n / (K pi_v)) for blocks of length (ln n)^2.
    const Distribution pi = stationary(g);
    const Count block = default_subsequence_length(g.vertex_count());
    const double blocks = static_cast<double>(steps / std::max<Count>(block, 1));
    double radius_min = std::numeric_limits<double>::infinity();
    double radius_max = 0.0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (pi[v] == 0.0 || blocks == 0.0) continue;
        const double r = std::sqrt(8.0 * std::log(static_cast<double>(g.vertex_count())) / (blocks * pi[v]));
        radius_min = std::min(radius_min, r);
        radius_max = std::max(radius_max, r);
    }
    std::vector<double> pooled;
    for (const auto& d : deviations) pooled.insert(pooled.end(), d.begin(), d.end());
    const Aggregate spread = aggregate(pooled);
    report.extra_json = json{{"rho", rho},
                             {"start", start},
                             {"steps", steps},
                             {"subsequence_length", block},
                             {"concentration_radius", {{"min", std::isfinite(radius_min) ? radius_min : 0.0}, {"max", radius_max}}},
                             {"rel_dev_histogram",
                              {{"lo", spread.histogram.lo}, {"hi", spread.histogram.hi}, {"counts", spread.histogram.counts}}}}
                            .dump();
    return report;
}

ExperimentReport exp_preservation(const ExperimentConfig& input) {
    ExperimentReport report;
    report.config = with_defaults(input);
    const ExperimentConfig& cfg = report.config;
    const Graph g = make_host(cfg);
    require_connected(g);
    const Vertex start = resolve_start(g, cfg, report);
    const double rho = density(g);
    const double eps = *cfg.eps;
    const Count steps = walk_steps(g.vertex_count(), *cfg.alpha);

    const double gamma = cfg.min_degree_constant * std::pow(eps, 0.25);
    const bool min_degree_ok =
        static_cast<double>(g.min_degree()) >= gamma * static_cast<double>(g.vertex_count());
    if (!min_degree_ok) {
        report.warnings.push_back("minimum degree " + std::to_string(g.min_degree()) + " is below gamma n = " +
                                  std::to_string(gamma * static_cast<double>(g.vertex_count())) +
                                  "; only the edge-count prediction is checked");
    }

    const SampledDiscrepancyOptions sample = sampling(cfg);
    const double host_disc = discrepancy_sampled(g, eps, sample).deviation;
    report.trials = run_trials(*cfg.trials, cfg.workers, [&](std::size_t t) {
        ListModel model(derive_seed(cfg.seed, t, kWalkStream), g.vertex_count());
        const EdgeSubgraph walked = walk_subgraph(run_walk(g, model, start, steps));
        const Graph gw = walked.to_graph();
        const double gw_disc = gw.edge_count() > 0 ? discrepancy_sampled(gw, eps, sample).deviation : 0.0;
        return TrialRecord{{"gw_edges", static_cast<double>(gw.edge_count())},
                           {"gw_discrepancy", gw_disc},
                           {"host_discrepancy", host_disc},
                           {"excess", gw_disc - host_disc}};
    });
    fill_aggregates(report);

    const double predicted = predicted_walk_edges(g.vertex_count(), rho, *cfg.alpha);
    report.predicted = Prediction{predicted, kWalkEdgesReference};
    report.checks.push_back(make_check("mean_edges_rel_error",
                                       relative_error(column_mean(report.trials, "gw_edges"), predicted), "<=",
                                       tolerance(cfg, "density_rel_tol")));
    if (min_degree_ok) {
        report.checks.push_back(
            make_check("max_discrepancy_excess", column_max(report.trials, "excess"), "<=", tolerance(cfg, "preservation_tol")));
    }
    report.extra_json = json{{"rho", rho},
                             {"start", start},
                             {"steps", steps},
                             {"gamma", gamma},
                             {"min_degree", g.min_degree()},
                             {"min_degree_condition", min_degree_ok}}
                            .dump();
    return report;
}

ExperimentReport exp_pathology(const ExperimentConfig& input) {
    ExperimentConfig fixed = input;
    fixed.generator = "two-clique";
    ExperimentReport report;
    report.config = with_defaults(fixed);
    const ExperimentConfig& cfg = report.config;
    const Graph g = make_host(cfg);
    const std::size_t small = two_clique_small_size(g.vertex_count(), cfg.generator_eps);
    const Vertex start = resolve_start(g, cfg, report);
    const Count steps = walk_steps(g.vertex_count(), *cfg.alpha);

    report.trials = run_trials(*cfg.trials, cfg.workers, [&](std::size_t t) {
        ListModel model(derive_seed(cfg.seed, t, kWalkStream), g.vertex_count());
        const WalkTrace trace = run_walk(g, model, start, steps);
        const bool crossed =
            std::any_of(trace.sequence.begin(), trace.sequence.end(), [&](Vertex v) { return v < small; });
        const EdgeSubgraph walked = walk_subgraph(trace);
        std::size_t small_edges = 0;
        std::size_t large_edges = 0;
        for (const Edge& e : walked.edges()) {
            if (e.v < small) ++small_edges;
            else if (e.u >= small) ++large_edges;
        }
        return TrialRecord{{"crossed", crossed ? 1.0 : 0.0},
                           {"edges", static_cast<double>(walked.size())},
                           {"small_clique_edges", static_cast<double>(small_edges)},
                           {"large_clique_edges", static_cast<double>(large_edges)}};
    });
    fill_aggregates(report);

    std::vector<double> crossed_edges;
    std::vector<double> stayed_edges;
    for (const auto& r : report.trials) (r.at("crossed") > 0.5 ? crossed_edges : stayed_edges).push_back(r.at("edges"));
    const double p_cross = static_cast<double>(crossed_edges.size()) / static_cast<double>(report.trials.size());
    const Aggregate crossed = aggregate(crossed_edges);
    const Aggregate stayed = aggregate(stayed_edges);

    double gap_in_se = 0.0;
    double pooled_se = 0.0;
    const double n1 = static_cast<double>(crossed.count);
    const double n2 = static_cast<double>(stayed.count);
    if (crossed.count >= 1 && stayed.count >= 1 && crossed.count + stayed.count > 2) {
        const double pooled_var = ((n1 - 1.0) * crossed.sd * crossed.sd + (n2 - 1.0) * stayed.sd * stayed.sd) / (n1 + n2 - 2.0);
        pooled_se = std::sqrt(pooled_var * (1.0 / n1 + 1.0 / n2));
        const double diff = std::abs(crossed.mean - stayed.mean);
        gap_in_se = pooled_se > 0.0 ? diff / pooled_se : (diff > 0.0 ? std::numeric_limits<double>::max() : 0.0);
    } else {
        report.warnings.push_back("only one crossing outcome occurred; conditional means are not comparable");
    }

    report.predicted = Prediction{p_cross, "crossing probability strictly inside (0, 1), independent of n"};
    report.checks.push_back(make_check("crossing_probability_above", p_cross, ">", tolerance(cfg, "crossing_p_lo")));
    report.checks.push_back(make_check("crossing_probability_below", p_cross, "<", tolerance(cfg, "crossing_p_hi")));
    report.checks.push_back(make_check("edge_mean_gap_in_pooled_se", gap_in_se, ">", tolerance(cfg, "mean_gap_se")));

    auto summary = [](const Aggregate& a) { return json{{"count", a.count}, {"mean", a.mean}, {"sd", a.sd}}; };
    report.extra_json = json{{"small_clique_size", small},
                             {"start", start},
                             {"steps", steps},
                             {"crossing_probability", p_cross},
                             {"pooled_se", pooled_se},
                             {"edges_given_crossed", summary(crossed)},
                             {"edges_given_not_crossed", summary(stayed)}}
                            .dump();
    return report;
}

ExperimentReport exp_mixing(const ExperimentConfig& input) {
    ExperimentReport report;
    report.config = with_defaults(input);
    const ExperimentConfig& cfg = report.config;
    const Graph g = make_host(cfg);
    require_connected(g);
    const Vertex start = resolve_start(g, cfg, report);
    const bool bipartite = is_bipartite(g);
    const Distribution pi = stationary(g);
    const std::size_t walks = *cfg.trials;

    std::vector<std::size_t> schedule = cfg.schedule;
    if (std::find(schedule.begin(), schedule.end(), cfg.tv_step) == schedule.end()) schedule.push_back(cfg.tv_step);
    std::sort(schedule.begin(), schedule.end());
    schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());

    for (std::size_t step : schedule) {
        const Distribution law = empirical_step_distribution(g, start, step, walks, derive_seed(cfg.seed, step, kWalkStream), cfg.workers);
        const double tv = tv_distance(law, pi);
        // Delta-method standard error of (1/2) sum_v sign(p_v - pi_v) p_v.
        double signed_mass = 0.0;
        double support = 0.0;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (law[v] > pi[v]) {
                signed_mass += law[v];
                support += law[v];
            } else if (law[v] < pi[v]) {
                signed_mass -= law[v];
                support += law[v];
            }
        }
        const double se = 0.5 * std::sqrt(std::max(0.0, support - signed_mass * signed_mass) / static_cast<double>(walks));
        report.trials.push_back(TrialRecord{{"step", static_cast<double>(step)}, {"tv", tv}, {"se", se}});
    }
    fill_aggregates(report);

    // Geometric envelope tv ~ c r^i fitted on log tv past burn-in.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, m = 0.0;
    for (const auto& r : report.trials) {
        if (r.at("step") < static_cast<double>(cfg.burn_in) || r.at("tv") <= 0.0) continue;
        const double x = r.at("step");
        const double y = std::log(r.at("tv"));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        m += 1.0;
    }
    json envelope = nullptr;
    if (m >= 2.0 && m * sxx - sx * sx > 0.0) {
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        const double intercept = (sy - slope * sx) / m;
        envelope = json{{"c", std::exp(intercept)}, {"rate", std::exp(slope)}};
    }

    report.predicted = Prediction{0.0, "max_v |Pr(W_i = v) - pi_v| <= c lambda^i: geometric decay towards pi"};
    if (bipartite) {
        report.warnings.push_back("host is bipartite (lambda_n = -1): the walk law does not converge; no assertions made");
    } else {
        for (const auto& r : report.trials) {
            if (static_cast<std::size_t>(r.at("step")) == cfg.tv_step) {
                report.checks.push_back(make_check("tv_at_step_" + std::to_string(cfg.tv_step), r.at("tv"), "<",
                                                   tolerance(cfg, "tv_max")));
            }
        }
        const double k = tolerance(cfg, "monotone_se");
        const TrialRecord* prev = nullptr;
        for (const auto& r : report.trials) {
            const auto step = static_cast<std::size_t>(r.at("step"));
            if (step < cfg.burn_in || std::find(cfg.schedule.begin(), cfg.schedule.end(), step) == cfg.schedule.end()) continue;
            if (prev != nullptr) {
                const double slack = k * std::hypot(prev->at("se"), r.at("se"));
                const double rise = r.at("tv") - prev->at("tv");
                report.checks.push_back(make_check("tv_rise_" + std::to_string(static_cast<long>(prev->at("step"))) + "_to_" +
                                                       std::to_string(static_cast<long>(r.at("step"))),
                                                   rise, "<=", slack));
            }
            prev = &r;
        }
    }
    report.extra_json = json{{"start", start}, {"bipartite", bipartite}, {"pi_start", pi[start]}, {"envelope", envelope}}.dump();
    return report;
}

ExperimentReport exp_tree_counterexample(const ExperimentConfig& input) {
    ExperimentConfig fixed = input;
    fixed.generator = "complete";
    ExperimentReport report;
    report.config = with_defaults(fixed);
    const ExperimentConfig& cfg = report.config;
    const Graph g = make_host(cfg);
    const std::size_t n = g.vertex_count();
    if (n < 4) throw ExperimentError("counterexample needs n >= 4");
    const Vertex root = resolve_start(g, cfg, report);
    const std::size_t branching = n / 2;
    const RootedTree tree = gen_nary_tree(branching, 2);
    const double eps = *cfg.eps;
    const SampledDiscrepancyOptions sample = sampling(cfg);

    report.trials = run_trials(*cfg.trials, cfg.workers, [&](std::size_t t) {
        ListModel model(derive_seed(cfg.seed, t, kWalkStream), n);
        const TreeHomomorphism h = random_homomorphism(g, tree, model, root);
        VertexSet hub(n);
        hub.insert(root);
        std::vector<char> level_one(n, 0);
        std::size_t distinct = 0;
        for (Vertex j = 1; j <= branching; ++j) {
            if (!level_one[h.image[j]]) {
                level_one[h.image[j]] = 1;
                ++distinct;
            }
            hub.insert(h.image[j]);
        }
        const EdgeSubgraph image = image_subgraph(tree, h);
        std::size_t outside = 0;
        for (const Edge& e : image.edges())
            if (!hub.contains(e.u) && !hub.contains(e.v)) ++outside;
        const Graph gt = image.to_graph();
        const double disc = discrepancy_sampled(gt, eps, sample).deviation;
        return TrialRecord{{"distinct_depth1", static_cast<double>(distinct)},
                           {"gt_edges", static_cast<double>(gt.edge_count())},
                           {"gt_discrepancy", disc},
                           {"edges_outside_hub", static_cast<double>(outside)}};
    });
    fill_aggregates(report);

    const double predicted = predicted_distinct_images(n, branching);
    report.predicted = Prediction{predicted, "(n - 1) * (1 - (1 - 1/(n - 1))^(n/2)) distinct depth-1 images"};
    double worst = 0.0;
    for (const auto& r : report.trials) worst = std::max(worst, relative_error(r.at("distinct_depth1"), predicted));
    report.checks.push_back(make_check("max_depth1_rel_error", worst, "<=", tolerance(cfg, "image_rel_tol")));
    report.checks.push_back(make_check("min_gt_discrepancy", column_min(report.trials, "gt_discrepancy"), ">", eps));
    report.checks.push_back(make_check("edges_outside_hub", column_max(report.trials, "edges_outside_hub"), "==", 0.0));
    report.extra_json = json{{"root_image", root},
                             {"branching", branching},
                             {"tree_vertices", tree.size()},
                             {"asymptotic_fraction", 1.0 - std::exp(-0.5)}}
                            .dump();
    return report;
}

ExperimentReport exp_tree_embedding(const ExperimentConfig& input) {
    ExperimentReport report;
    report.config = with_defaults(input);
    const ExperimentConfig& cfg = report.config;
    const Graph g = make_host(cfg);
    require_connected(g);
    const std::size_t n = g.vertex_count();
    const Vertex root = resolve_start(g, cfg, report);
    const double rho = density(g);
    const double eps = *cfg.eps;
    const Count edges = walk_steps(n, *cfg.alpha);
    const SampledDiscrepancyOptions sample = sampling(cfg);
    const bool measure_discrepancy = *cfg.sample_trials > 0;

    auto make_tree = [&](std::size_t t, std::size_t max_degree) {
        if (cfg.tree == "path") return gen_path_tree(edges);
        if (cfg.tree == "nary") return gen_nary_tree(cfg.branching, cfg.depth);
        if (cfg.tree == "random") return gen_random_tree(edges, max_degree, derive_seed(cfg.seed, t, kTreeStream));
        throw ExperimentError("unknown tree kind \"" + cfg.tree + "\"");
    };
    if (cfg.tree == "random" && cfg.max_degree < 2) throw ExperimentError("max_degree must be at least 2");

    const double host_disc = measure_discrepancy ? discrepancy_sampled(g, eps, sample).deviation : 0.0;
    auto embed = [&](std::size_t t, const RootedTree& tree) {
        ListModel model(derive_seed(cfg.seed, t, kWalkStream), n);
        const TreeHomomorphism h = random_homomorphism(g, tree, model, root);
        const Graph gt = image_subgraph(tree, h).to_graph();
        const double disc = measure_discrepancy && gt.edge_count() > 0 ? discrepancy_sampled(gt, eps, sample).deviation : 0.0;
        return std::pair{gt.edge_count(), disc};
    };

    std::vector<double> alpha_used(*cfg.trials);
    report.trials = run_trials(*cfg.trials, cfg.workers, [&](std::size_t t) {
        const RootedTree tree = make_tree(t, cfg.max_degree);
        const auto [gt_edges, disc] = embed(t, tree);
        alpha_used[t] = static_cast<double>(tree.edge_count()) / (static_cast<double>(n) * static_cast<double>(n));
        const double predicted = predicted_walk_edges(n, rho, alpha_used[t]);
        TrialRecord r{{"gt_edges", static_cast<double>(gt_edges)},
                      {"predicted_edges", predicted},
                      {"rel_error", relative_error(static_cast<double>(gt_edges), predicted)},
                      {"tree_max_degree", static_cast<double>(tree.max_degree())}};
        if (measure_discrepancy) {
            r["gt_discrepancy"] = disc;
            r["host_discrepancy"] = host_disc;
            r["excess"] = disc - host_disc;
        }
        return r;
    });
    fill_aggregates(report);

    const double mean_pred = column_mean(report.trials, "predicted_edges");
    report.predicted = Prediction{mean_pred, "(1 - exp(-2 alpha / rho)) * rho * C(n, 2) edges in the tree image"};
    report.checks.push_back(make_check("mean_edges_rel_error",
                                       relative_error(column_mean(report.trials, "gt_edges"), mean_pred), "<=",
                                       tolerance(cfg, "density_rel_tol")));
    if (measure_discrepancy) {
        report.checks.push_back(
            make_check("max_discrepancy_excess", column_max(report.trials, "excess"), "<=", tolerance(cfg, "preservation_tol")));
    }

    json sweep = json::array();
    if (cfg.delta_sweep && cfg.tree == "random") {
        const auto cap = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
        std::vector<std::size_t> deltas;
        for (std::size_t d = 2; d <= cap; d = std::max(d + 1, d * 3 / 2)) deltas.push_back(d);
        std::vector<json> rows(deltas.size());
        parallel_for(
            deltas.size(),
            [&](std::size_t i) {
                const RootedTree tree = make_tree(1000 + i, deltas[i]);
                const auto [gt_edges, disc] = embed(1000 + i, tree);
                const double predicted = predicted_walk_edges(n, rho, static_cast<double>(tree.edge_count()) /
                                                                         (static_cast<double>(n) * static_cast<double>(n)));
                rows[i] = json{{"max_degree", deltas[i]},
                               {"gt_edges", gt_edges},
                               {"rel_error", relative_error(static_cast<double>(gt_edges), predicted)},
                               {"gt_discrepancy", disc}};
            },
            cfg.workers);
        for (auto& r : rows) sweep.push_back(std::move(r));
    }
    report.extra_json = json{{"rho", rho}, {"root_image", root}, {"tree", cfg.tree}, {"delta_sweep", sweep}}.dump();
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    const std::string& name = cfg.experiment;
    if (name == "density") return exp_density(cfg);
    if (name == "visits") return exp_visits(cfg);
    if (name == "preservation") return exp_preservation(cfg);
    if (name == "pathology") return exp_pathology(cfg);
    if (name == "mixing") return exp_mixing(cfg);
    if (name == "tree-counterexample") return exp_tree_counterexample(cfg);
    if (name == "tree-embedding") return exp_tree_embedding(cfg);
    throw ExperimentError("unknown experiment \"" + name + "\"");
}

}  // namespace qwalk
