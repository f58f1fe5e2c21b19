#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bofuse/dataset.hpp"
#include "bofuse/noise.hpp"
#include "bofuse/rng.hpp"

namespace bofuse {

inline double logistic_fn(double z) { return 1.0 / (1.0 + std::exp(-z)); }

enum class ExampleId { ex1, ex2, ex3 };

struct GeneratorSpec {
    ExampleId example = ExampleId::ex1;
    std::size_t n = 5000;
    std::uint64_t seed = 0;
};

enum class NoiseMechanism { class_low, class_high, instance };

// class_low: rho_minus = 0.1, rho_plus = 0.3; class_high: 0.15 / 0.35.
// instance: rho_minus(x) = minus_base + minus_amp * sigma(x1),
//           rho_plus(x)  = plus_base + plus_amp * sigma(-x1).
struct NoiseSpec {
    NoiseMechanism mechanism = NoiseMechanism::class_low;
    double minus_base = 0.05, minus_amp = 0.2;
    double plus_base = 0.1, plus_amp = 0.25;

    double rho_plus_at(std::span<const double> x) const;
    double rho_minus_at(std::span<const double> x) const;
};

// Exact simulation-side access to eta, the noise-rate functions, and the
// implied noisy posterior (Eq.-consistent to machine precision).
struct OracleAccess {
    std::function<double(std::span<const double>)> eta;
    std::function<double(std::span<const double>)> rho_plus;
    std::function<double(std::span<const double>)> rho_minus;

    double eta_rho(std::span<const double> x) const {
        return noisy_posterior_forward(eta(x), rho_plus(x), rho_minus(x));
    }
};

struct CleanSample {
    FeatureMatrix features;
    std::vector<Label> labels;
    OracleAccess oracle;  // zero noise attached
};

// Draws covariates from the example's hierarchical scheme and labels from
// y ~ Bernoulli(eta(x)) mapped to {-1,+1}.
CleanSample gen_clean(const GeneratorSpec& spec);

// Returns a copy of the oracle with the noise-rate functions of `noise`.
OracleAccess attach_noise(const OracleAccess& oracle, const NoiseSpec& noise);

// Exact NoiseModel matching the spec (for oracle-nuisance runs).
NoiseModel exact_noise_model(const NoiseSpec& noise);

// Flips each label independently: +1 flips with rho_plus(x), -1 with
// rho_minus(x).
std::vector<Label> inject_noise(const std::vector<Label>& labels, const FeatureMatrix& features,
                                const NoiseSpec& noise, Rng rng);

// Uniform subsample without replacement of size n0 carrying (x, y, y_noisy).
AuditedDataset make_audited(const FeatureMatrix& features, const std::vector<Label>& clean,
                            const std::vector<Label>& noisy, std::size_t n0, Rng rng);

struct EvalSet {
    FeatureMatrix features;
    OracleAccess oracle;
};

EvalSet build_eval_set(const GeneratorSpec& spec);

// Inverse of F(u) = (8 + u^3) / 16 on (-2, 2); closed form via cbrt.
double inverse_u_cdf(double p);

std::size_t example_dim(ExampleId id);

}  // namespace bofuse
