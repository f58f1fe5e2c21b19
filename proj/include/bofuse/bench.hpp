#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bofuse/metrics.hpp"
#include "bofuse/purify.hpp"
#include "bofuse/selection.hpp"
#include "bofuse/simgen.hpp"

namespace bofuse {

enum class Method {
    oracle,
    vanilla_d,
    vanilla_drho,
    bo_only,
    pro_pt,
    pro_at,
    pro_at_budget,
    pro_hybrid,
};

std::string method_name(Method m);
Method method_from_name(const std::string& name);

enum class TauSource { fixed, cv, budget };

struct TauConfig {
    TauSource source = TauSource::fixed;
    double value = 0.1;                  // fixed
    std::vector<double> grid;            // cv
    double fraction = 0.1;               // budget
};

struct ExperimentConfig {
    ExampleId example = ExampleId::ex1;
    std::size_t n = 5000;
    std::size_t n0 = 500;
    std::size_t n_eval = 20000;
    NoiseSpec noise;
    std::vector<Method> methods = {Method::oracle, Method::pro_at, Method::pro_pt,
                                   Method::vanilla_drho};
    LearnerSpec nuisance;
    LearnerSpec noise_learner;
    LearnerSpec final_learner;
    LossKind loss = LossKind::hinge;
    NoiseEstimatorKind noise_estimator = NoiseEstimatorKind::class_counts;
    TauConfig tau;
    double budget_fraction = 0.1;        // pro_at_budget query budget
    double hybrid_query_fraction = 0.5;  // pro_hybrid split
    std::size_t trials = 50;
    std::uint64_t seed = 1;
    std::size_t threads = 0;  // 0: hardware concurrency
    std::string out_dir = "out";

    void validate() const;
};

struct TrialResult {
    std::string method;
    std::size_t trial = 0;
    MetricsReport metrics;
    std::optional<double> extraction_fraction;
    std::optional<double> extraction_purity;
    std::optional<std::size_t> extraction_count;
    std::size_t query_cost = 0;
    std::optional<double> tau_used;
    double wall_seconds = 0.0;
};

struct TrialFailure {
    std::size_t trial = 0;
    std::string message;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::string config_hash;
    std::vector<TrialResult> results;    // sorted by (method order, trial)
    std::vector<TrialFailure> failures;
};

struct AggregateRow {
    std::string method;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t trials = 0;
};

// One TrialResult per requested method, all computed on the same freshly
// generated (noisy, audited, eval) triple; streams derive from (seed, trial).
std::vector<TrialResult> run_trial(const ExperimentConfig& cfg, std::size_t trial_index);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

std::vector<AggregateRow> aggregate(const ExperimentReport& report);

// Writes results.csv (`method,metric,mean,std,trials`), results.md (paper-
// style table), results.json (config hash + per-trial records). Returns the
// file paths.
std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& out_dir);

// Canonical 64-bit FNV-1a hash of the config serialization.
std::string config_hash(const ExperimentConfig& cfg);

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

}  // namespace bofuse
