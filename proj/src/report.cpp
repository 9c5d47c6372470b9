#include "qwalk/report.hpp"

#include <set>

namespace qwalk {

using nlohmann::json;

json to_json(const QuasirandomnessReport& r) {
    json j;
    j["rho"] = r.rho;
    j["eps_target"] = r.eps_target;
    j["discrepancy"] = r.discrepancy;
    j["method"] = to_string(r.method);
    j["pairs_checked"] = r.pairs_checked;
    j["c4_labelled"] = r.c4_labelled;
    j["trace_p4"] = r.trace_p4 ? json(*r.trace_p4) : json(nullptr);
    j["lambda_bound"] = r.lambda_bound;
    j["lambda_estimate"] = r.lambda_estimate ? json(*r.lambda_estimate) : json(nullptr);
    j["connected"] = r.connected;
    j["bipartite"] = r.bipartite;
    return j;
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    j["generator"] = c.generator ? json(*c.generator) : json(nullptr);
    j["n"] = c.n ? json(*c.n) : json(nullptr);
    j["p"] = c.p;
    j["generator_eps"] = c.generator_eps;
    j["degree"] = c.degree;
    j["graph_path"] = c.graph_path;
    j["alpha"] = c.alpha ? json(*c.alpha) : json(nullptr);
    j["eps"] = c.eps ? json(*c.eps) : json(nullptr);
    j["trials"] = c.trials ? json(*c.trials) : json(nullptr);
    j["seed"] = c.seed;
    j["start"] = c.start ? json(*c.start) : json(nullptr);
    j["sample_trials"] = c.sample_trials ? json(*c.sample_trials) : json(nullptr);
    j["refine_rounds"] = c.refine_rounds ? json(*c.refine_rounds) : json(nullptr);
    j["schedule"] = c.schedule;
    j["burn_in"] = c.burn_in;
    j["tv_step"] = c.tv_step;
    j["tree"] = c.tree;
    j["max_degree"] = c.max_degree;
    j["branching"] = c.branching;
    j["depth"] = c.depth;
    j["delta_sweep"] = c.delta_sweep;
    j["min_degree_constant"] = c.min_degree_constant;
    j["tolerances"] = c.tolerances;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ExperimentError("config must be a JSON object");
    static const std::set<std::string> known = {
        "experiment", "generator", "n", "p", "generator_eps", "degree", "graph_path", "alpha", "eps",
        "trials", "seed", "start", "sample_trials", "refine_rounds", "schedule", "burn_in", "tv_step",
        "tree", "max_degree", "branching", "depth", "delta_sweep", "min_degree_constant", "tolerances", "workers"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw ExperimentError("unknown config key \"" + key + "\"");
    }
    ExperimentConfig c;
    auto get = [&](const char* key, auto& field) {
        if (!j.contains(key) || j.at(key).is_null()) return;
        using T = std::remove_reference_t<decltype(field)>;
        if constexpr (requires { typename T::value_type; field.has_value(); }) {
            field = j.at(key).get<typename T::value_type>();
        } else {
            j.at(key).get_to(field);
        }
    };
    try {
        get("experiment", c.experiment);
        get("generator", c.generator);
        get("n", c.n);
        get("p", c.p);
        get("generator_eps", c.generator_eps);
        get("degree", c.degree);
        get("graph_path", c.graph_path);
        get("alpha", c.alpha);
        get("eps", c.eps);
        get("trials", c.trials);
        get("seed", c.seed);
        get("start", c.start);
        get("sample_trials", c.sample_trials);
        get("refine_rounds", c.refine_rounds);
        get("schedule", c.schedule);
        get("burn_in", c.burn_in);
        get("tv_step", c.tv_step);
        get("tree", c.tree);
        get("max_degree", c.max_degree);
        get("branching", c.branching);
        get("depth", c.depth);
        get("delta_sweep", c.delta_sweep);
        get("min_degree_constant", c.min_degree_constant);
        get("tolerances", c.tolerances);
        get("workers", c.workers);
    } catch (const json::exception& e) {
        throw ExperimentError(std::string("bad config value: ") + e.what());
    }
    return c;
}

json to_json(const Aggregate& a) {
    return json{{"count", a.count},
                {"mean", a.mean},
                {"sd", a.sd},
                {"min", a.min},
                {"max", a.max},
                {"histogram", {{"lo", a.histogram.lo}, {"hi", a.histogram.hi}, {"counts", a.histogram.counts}}}};
}

json to_json(const ExperimentReport& r) {
    json j;
    j["schema"] = kReportSchema;
    j["code_version"] = QWALK_VERSION;
    j["config"] = to_json(r.config);
    json trials = json::array();
    for (std::size_t i = 0; i < r.trials.size(); ++i) {
        json t = r.trials[i];
        t["trial"] = i;
        trials.push_back(std::move(t));
    }
    j["trials"] = std::move(trials);
    json aggregates = json::object();
    for (const auto& [name, a] : r.aggregates) aggregates[name] = to_json(a);
    j["aggregates"] = std::move(aggregates);
    j["predicted"] = r.predicted ? json{{"value", r.predicted->value}, {"reference", r.predicted->reference}} : json(nullptr);
    json checks = json::array();
    for (const Check& c : r.checks) {
        checks.push_back(
            {{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"relation", c.relation}, {"pass", c.pass}});
    }
    j["checks"] = std::move(checks);
    j["warnings"] = r.warnings;
    j["extra"] = json::parse(r.extra_json);
    j["pass"] = r.passed();
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace qwalk
