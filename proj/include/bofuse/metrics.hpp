#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bofuse/dataset.hpp"
#include "bofuse/learners.hpp"

namespace bofuse {

struct MetricsReport {
    std::optional<double> excess_risk;  // simulation only
    double acc = 0.0;
    double auc = 0.0;
    double f1 = 0.0;
    double pr_auc = 0.0;
    std::size_t n_eval = 0;
};

// Monte-Carlo excess 0-1 risk against the known generator: mean over eval
// points of risk(h(x)) - min(eta, 1-eta), with risk(+1) = 1-eta and
// risk(-1) = eta. Every summand is non-negative.
double excess_risk_mc(const ScoringModel& model, const FeatureMatrix& eval_features,
                      const std::function<double(std::span<const double>)>& oracle_eta);

// Mann-Whitney AUC: probability a random positive outranks a random
// negative, ties counting one half.
double auc(const std::vector<double>& scores, const std::vector<Label>& labels);

// 2TP / (2TP + FP + FN) with +1 the positive class; 0 on an empty denominator.
double f1(const std::vector<Label>& pred, const std::vector<Label>& truth);

// Area under the precision-recall step curve (ties grouped, no interpolation).
double pr_auc(const std::vector<double>& scores, const std::vector<Label>& labels);

double accuracy(const std::vector<Label>& pred, const std::vector<Label>& truth);

}  // namespace bofuse
