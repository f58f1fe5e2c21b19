#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bofuse/dataset.hpp"
#include "bofuse/learners.hpp"

namespace bofuse {

// Gradient boosting over axis-aligned depth-1 trees. Each round fits a stump
// to the negative loss gradient by least squares and steps with shrinkage.
class BoostedStumps {
public:
    struct Stump {
        std::size_t feature = 0;
        double threshold = 0.0;
        double left = 0.0;   // value when x[feature] < threshold
        double right = 0.0;  // value otherwise
    };

    BoostedStumps() = default;

    void train(const FeatureMatrix& features, const LabelProvider& labels, LossKind loss,
               std::size_t rounds, double shrinkage);

    double value(std::span<const double> x) const;
    std::size_t input_dim() const { return dim_; }
    std::size_t rounds_run() const { return stumps_.size(); }
    double last_loss = 0.0;

private:
    std::size_t dim_ = 0;
    double base_ = 0.0;
    double shrinkage_ = 0.1;
    std::vector<Stump> stumps_;
};

}  // namespace bofuse
