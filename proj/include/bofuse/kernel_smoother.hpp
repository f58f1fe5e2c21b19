#pragma once

#include <span>
#include <vector>

#include "bofuse/dataset.hpp"

namespace bofuse {

// Nadaraya-Watson smoother with a Gaussian kernel on standardized inputs:
//   f(x) = sum_i K(||x - x_i|| / h) t_i / sum_i K(||x - x_i|| / h).
// Falls back to the global target mean where every weight underflows.
class KernelSmoother {
public:
    KernelSmoother(const FeatureMatrix& features, std::vector<double> targets, double bandwidth);

    double value(std::span<const double> x) const;
    std::size_t input_dim() const { return dim_; }
    double bandwidth() const { return bandwidth_; }

private:
    std::size_t dim_;
    std::vector<double> xs_;  // standardized train rows
    std::vector<double> targets_;
    std::vector<double> mean_, inv_sd_;
    double bandwidth_;
    double fallback_;
};

}  // namespace bofuse
