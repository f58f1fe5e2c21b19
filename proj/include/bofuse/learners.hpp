#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bofuse/dataset.hpp"
#include "bofuse/rng.hpp"

namespace bofuse {

enum class LossKind { mse, hinge, sigmoid };

enum class LearnerKind { mlp, kernel, boosted_stumps };

// How a learner is configured. Numeric hyperparameters must be strictly
// positive; the mlp needs at least one hidden layer.
struct LearnerSpec {
    LearnerKind kind = LearnerKind::mlp;

    // mlp
    std::vector<std::size_t> hidden = {64, 64};
    std::size_t epochs = 40;
    std::size_t batch = 128;
    double step_size = 0.1;

    // kernel
    double bandwidth = 1.0;

    // boosted stumps
    std::size_t rounds = 200;
    double shrinkage = 0.1;

    void validate() const;
};

// A fitted scoring function f: R^d -> R with fitting metadata. Immutable and
// shareable once fitted.
class ScoringModel {
public:
    virtual ~ScoringModel() = default;
    virtual double score(std::span<const double> x) const = 0;
    virtual std::size_t input_dim() const = 0;

    double training_loss = 0.0;
    std::size_t epochs_run = 0;
};

using ModelPtr = std::shared_ptr<const ScoringModel>;

// Scores a whole matrix; throws DimMismatchError if dims differ.
std::vector<double> score_all(const ScoringModel& model, const FeatureMatrix& features);

// Per-epoch label source. Static providers return the same labels at every
// epoch; dynamic ones (Pro-PT) redraw per epoch.
struct LabelProvider {
    std::size_t size = 0;
    bool per_epoch = false;
    std::function<Label(std::uint64_t epoch, std::size_t idx)> at;

    static LabelProvider constant(std::vector<Label> labels);
};

// MSE regression of real targets in [0,1]; outputs are clipped to [0,1] at
// evaluation. kind must be mlp or kernel.
ModelPtr fit_regressor(const FeatureMatrix& features, const std::vector<double>& targets,
                       const LearnerSpec& spec, Rng rng);

// Surrogate-risk minimization (hinge or sigmoid loss); kind mlp or
// boosted_stumps. The predicted label is sign(f(x)) with sign(0) := +1.
ModelPtr fit_classifier(const FeatureMatrix& features, const LabelProvider& labels,
                        LossKind loss, const LearnerSpec& spec, Rng rng);

std::vector<Label> predict_labels(const ScoringModel& model, const FeatureMatrix& features);

// 5-fold CV bandwidth selection for the kernel regressor; returns the grid
// value minimizing validation MSE (ties to the smaller bandwidth).
double select_kernel_bandwidth(const FeatureMatrix& features, const std::vector<double>& targets,
                               const std::vector<double>& grid, Rng rng, std::size_t folds = 5);

}  // namespace bofuse
