#pragma once

#include <string>
#include <vector>

#include "bofuse/dataset.hpp"
#include "bofuse/tagging.hpp"

namespace bofuse {

struct TauGrid {
    std::vector<double> candidates;  // strictly ascending, nonempty
    void validate() const;
};

struct CvReport {
    std::vector<double> taus;
    std::vector<std::vector<double>> fold_accuracy;  // [candidate][fold]
    std::vector<double> mean_accuracy;               // per candidate
    double tau_star = 0.0;
};

enum class NoiseEstimatorKind { class_counts, instance_regression };

struct CvSpecs {
    LearnerSpec nuisance;       // eta_rho regression
    LearnerSpec noise_learner;  // instance-noise regression (when applicable)
    LearnerSpec final_learner;
    LossKind loss = LossKind::hinge;
    NoiseEstimatorKind noise_estimator = NoiseEstimatorKind::class_counts;
    std::size_t folds = 5;
};

// 5-fold cross-validation for the security margin. eta_rho is fitted once on
// the noisy set; noise rates are re-estimated per training fold; for every
// (fold, candidate) the full extract-tag-train pipeline runs and is scored
// on the held-out fold's clean labels. Ties break to the smallest candidate.
// AT mode consumes `cv_oracle` queries (pass a dedicated stream).
CvReport select_tau_cv(const TauGrid& grid, const NoisyDataset& noisy,
                       const AuditedDataset& audited, TagMode mode, const CvSpecs& specs,
                       ExpertOracle* cv_oracle, Rng rng);

void write_cv_csv(const CvReport& report, const std::string& path);
void write_cv_json(const CvReport& report, const std::string& path);

}  // namespace bofuse
