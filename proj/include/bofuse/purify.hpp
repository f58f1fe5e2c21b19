#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bofuse/dataset.hpp"
#include "bofuse/noise.hpp"

namespace bofuse {

struct SecurityMargin {
    double tau = 0.0;
};

// Split of the noisy set into extracted (BO-labeled) and boundary samples.
// The margin score is s_i = eta_rho(x_i) - [1/2 - (rho_plus(x_i) -
// rho_minus(x_i))/2]; sample i is boundary iff |s_i| <= tau, otherwise it is
// extracted with BO label sign(s_i).
struct Partition {
    std::vector<std::size_t> bo_indices;
    std::vector<Label> bo_labels;
    std::vector<std::size_t> boundary_indices;
    SecurityMargin tau;
    std::vector<double> margin_scores;  // one per sample
};

struct ExtractionStats {
    std::size_t m = 0;       // extracted count
    double fraction = 0.0;   // m / n
    std::optional<double> purity;
};

Partition extract_bo(const NoisyDataset& noisy, const NoisyPosterior& eta_rho,
                     const NoiseModel& noise, SecurityMargin tau);

// Purity compares assigned BO labels against sign(oracle_eta(x) - 1/2); only
// available in simulation. Absent when nothing was extracted.
ExtractionStats extraction_stats(
    const Partition& p, const FeatureMatrix& features,
    const std::function<double(std::span<const double>)>* oracle_eta = nullptr);

// Order-statistic margin: tau = budget-th smallest |s_i| so that `budget`
// samples fall on the boundary (exactly, when the |s_i| are distinct).
// budget = 0 returns half the smallest |s_i|.
SecurityMargin budget_margin_search(const NoisyDataset& noisy, const NoisyPosterior& eta_rho,
                                    const NoiseModel& noise, std::size_t budget);

// Budget-exact partition: boundary = first `budget` samples ordered by
// (|s_i|, index). Coincides with extract_bo(budget_margin_search(...)) when
// the |s_i| are distinct; ties are resolved toward ascending index.
Partition extract_bo_with_budget(const NoisyDataset& noisy, const NoisyPosterior& eta_rho,
                                 const NoiseModel& noise, std::size_t budget);

// Audit CSV: `index,status,bo_label,margin_score` (status extracted|boundary,
// bo_label 0 for boundary rows).
void write_partition_csv(const Partition& p, const std::string& path);

}  // namespace bofuse
