#pragma once

#include <functional>
#include <span>
#include <variant>

#include "bofuse/dataset.hpp"
#include "bofuse/learners.hpp"
#include "bofuse/rng.hpp"

namespace bofuse {

// Projection constant: estimated noise pairs are scaled multiplicatively so
// that rho_plus + rho_minus <= 1 - kNoiseProjectionDelta. This keeps the
// pseudo-posterior denominator at least kNoiseProjectionDelta.
inline constexpr double kNoiseProjectionDelta = 0.01;

// Upper clip for noise-rate regressions (they feed the eta_pse denominator).
inline constexpr double kRhoClipHigh = 1.0 - 1e-6;

struct NoisePair {
    double rho_plus = 0.0;
    double rho_minus = 0.0;
};

// Scales (rho_plus, rho_minus) so their sum is at most 1 - delta, preserving
// their ratio.
NoisePair project_noise_pair(double rho_plus, double rho_minus);

// Constant flip rates (Condition: class-dependent noise).
struct ClassNoise {
    double rho_plus = 0.0;
    double rho_minus = 0.0;
};

// Flip rates varying with the instance (Condition: instance-dependent noise).
struct InstanceNoise {
    std::function<double(std::span<const double>)> rho_plus_fn;
    std::function<double(std::span<const double>)> rho_minus_fn;
};

using NoiseModel = std::variant<ClassNoise, InstanceNoise>;

// Evaluates the noise model at x, applying the pair projection.
NoisePair noise_at(const NoiseModel& noise, std::span<const double> x);

// Fitted (or exact) noisy posterior eta_rho(x) = P(Y_noisy = 1 | X = x),
// range-clipped to [0,1].
struct NoisyPosterior {
    std::function<double(std::span<const double>)> eta_rho_fn;

    double operator()(std::span<const double> x) const { return eta_rho_fn(x); }

    static NoisyPosterior from_model(ModelPtr model);
    static NoisyPosterior from_function(std::function<double(std::span<const double>)> fn);
};

// eta_rho = (1 - rho_plus - rho_minus) * eta + rho_minus. Throws
// InvalidNoiseError when rho_plus + rho_minus >= 1.
double noisy_posterior_forward(double eta, double rho_plus, double rho_minus);

// Inverse map: (eta_rho - rho_minus) / (1 - rho_plus - rho_minus), clipped to
// [0,1]; the denominator is floored at the projection delta.
double pseudo_posterior(double eta_rho, double rho_plus, double rho_minus);
double pseudo_posterior(double eta_rho, const NoisePair& pair);

// Count-ratio estimators for the class-dependent mechanism, then projection.
ClassNoise estimate_class_noise(const AuditedDataset& audited);

// Per-class regression of the mismatch indicator on x for the
// instance-dependent mechanism. Each class needs at least
// kInstanceNoiseMinRows rows.
inline constexpr std::size_t kInstanceNoiseMinRows = 2;
InstanceNoise estimate_instance_noise(const AuditedDataset& audited, const LearnerSpec& spec,
                                      Rng rng);

// Regression of I(y_noisy = 1) on x over the large noisy sample.
NoisyPosterior estimate_noisy_posterior(const NoisyDataset& noisy, const LearnerSpec& spec,
                                        Rng rng);

}  // namespace bofuse
