#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bofuse/learners.hpp"
#include "bofuse/rng.hpp"

namespace bofuse {

// Fully-connected network: ReLU hidden layers, linear or logistic output,
// trained by minibatch gradient descent with a fixed step size. Parameters
// live in one flat vector so tests can finite-difference them.
class Mlp {
public:
    enum class Output { linear, logistic };

    Mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden, Output out, Rng& rng);

    // Raw forward pass on an already standardized input.
    double forward_std(std::span<const double> x) const;

    // Standardizes with the stored train statistics, then forwards.
    double forward(std::span<const double> x) const;

    // Mean loss over the batch and the gradient w.r.t. params (accumulated
    // into grad, which must have params size and be zeroed by the caller).
    double loss_and_grad(const std::vector<double>& xs, std::size_t rows,
                         const std::vector<double>& targets, LossKind loss,
                         std::vector<double>& grad) const;

    // Minibatch GD. Targets per epoch come from `targets_at`; rows are
    // shuffled each epoch with `rng`. Throws DivergedTrainingError if the
    // epoch loss or any parameter goes non-finite.
    void train(const FeatureMatrix& features,
               const std::function<double(std::uint64_t epoch, std::size_t idx)>& targets_at,
               LossKind loss, std::size_t epochs, std::size_t batch, double step, Rng& rng);

    // Fit standardization statistics from the training matrix.
    void fit_standardizer(const FeatureMatrix& features);

    std::size_t input_dim() const { return dims_.front(); }
    std::size_t n_params() const { return params_.size(); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }
    double last_epoch_loss = 0.0;

private:
    struct LayerView {
        std::size_t w_off, b_off, in, out;
    };
    std::vector<std::size_t> dims_;  // input, hidden..., 1
    std::vector<LayerView> layers_;
    std::vector<double> params_;
    Output output_;
    std::vector<double> mean_, inv_sd_;

    friend struct MlpWorkspace;
};

}  // namespace bofuse
