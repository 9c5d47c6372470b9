#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/random.hpp"

namespace qwalk {

/// A configuration that cannot run (unknown experiment, host without a
/// balanced vertex, disconnected host, ...). Maps to CLI exit code 2.
class ExperimentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Run parameters. Fields left empty are resolved per experiment by
/// with_defaults (e.g. density runs G(2000, 1/2) with 10 trials).
struct ExperimentConfig {
    std::string experiment;

    // Host graph.
    std::optional<std::string> generator;  // gnp | complete | two-clique | circulant | file
    std::optional<std::size_t> n;
    double p = 0.5;
    double generator_eps = 0.3;  // two-clique
    std::size_t degree = 100;    // circulant (even)
    std::string graph_path;      // file

    std::optional<double> alpha;
    std::optional<double> eps;
    std::optional<std::size_t> trials;
    Seed seed = 1;
    std::optional<Vertex> start;

    // Sampled discrepancy.
    std::optional<std::size_t> sample_trials;
    std::optional<unsigned> refine_rounds;

    // Walk mixing.
    std::vector<std::size_t> schedule = {0, 1, 2, 4, 8, 16};
    /// Monotone decrease is asserted along schedule steps >= burn_in.
    std::size_t burn_in = 2;
    /// Extra step whose TV distance is compared against tolerance tv_max.
    std::size_t tv_step = 10;

    // Trees.
    std::string tree = "random";  // path | random | nary
    std::size_t max_degree = 4;
    std::size_t branching = 2;
    std::size_t depth = 2;
    bool delta_sweep = false;

    /// gamma = C eps^(1/4) in the minimum-degree condition.
    double min_degree_constant = 0.5;

    std::map<std::string, double> tolerances;

    /// Worker threads; not echoed since it never changes results.
    unsigned workers = 0;
};

/// Experiment names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// Fills tolerances and experiment-specific defaults that were not set.
ExperimentConfig with_defaults(ExperimentConfig cfg);

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<Count> counts;
};

struct Aggregate {
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
    Histogram histogram;
};

/// Mean, sample sd, range and a 10-bin histogram over [min, max].
Aggregate aggregate(const std::vector<double>& values);

struct Prediction {
    double value = 0.0;
    /// Human-readable formula the value comes from.
    std::string reference;
};

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  // "<", "<=", ">", ">=", "==", "in"
    bool pass = false;
};

using TrialRecord = std::map<std::string, double>;

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<TrialRecord> trials;
    std::map<std::string, Aggregate> aggregates;
    std::optional<Prediction> predicted;
    std::vector<Check> checks;
    std::vector<std::string> warnings;
    /// Experiment-specific series (curves, sweeps, histograms) as JSON text.
    std::string extra_json = "{}";

    bool passed() const;
};

/// Recomputes aggregates for every metric present in all trial records.
void fill_aggregates(ExperimentReport& report);

/// Builds the host graph described by the config.
Graph make_host(const ExperimentConfig& cfg);

ExperimentReport exp_density(const ExperimentConfig& cfg);
ExperimentReport exp_visits(const ExperimentConfig& cfg);
ExperimentReport exp_preservation(const ExperimentConfig& cfg);
ExperimentReport exp_pathology(const ExperimentConfig& cfg);
ExperimentReport exp_mixing(const ExperimentConfig& cfg);
ExperimentReport exp_tree_counterexample(const ExperimentConfig& cfg);
ExperimentReport exp_tree_embedding(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment after applying defaults.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// (1 - e^(-2 alpha / rho)) rho C(n, 2).
double predicted_walk_edges(std::size_t n, double rho, double alpha);

/// Expected number of distinct values among m uniform draws from n - 1.
double predicted_distinct_images(std::size_t n, std::size_t draws);

// Seed streams: host generation, per-trial list models, discrepancy sampling,
// random trees. Shared by every experiment so coupled runs line up.
inline constexpr std::uint64_t kHostStream = 1;
inline constexpr std::uint64_t kWalkStream = 2;
inline constexpr std::uint64_t kSampleStream = 3;
inline constexpr std::uint64_t kTreeStream = 4;

}  // namespace qwalk
