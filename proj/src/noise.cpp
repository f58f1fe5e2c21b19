#include "bofuse/noise.hpp"

#include <algorithm>
#include <cmath>

#include "bofuse/errors.hpp"

namespace bofuse {

NoisePair project_noise_pair(double rho_plus, double rho_minus) {
    rho_plus = std::max(rho_plus, 0.0);
    rho_minus = std::max(rho_minus, 0.0);
    const double sum = rho_plus + rho_minus;
    const double cap = 1.0 - kNoiseProjectionDelta;
    if (sum > cap) {
        const double scale = cap / sum;
        rho_plus *= scale;
        rho_minus *= scale;
    }
    return {rho_plus, rho_minus};
}

NoisePair noise_at(const NoiseModel& noise, std::span<const double> x) {
    if (const auto* cn = std::get_if<ClassNoise>(&noise)) {
        return project_noise_pair(cn->rho_plus, cn->rho_minus);
    }
    const auto& in = std::get<InstanceNoise>(noise);
    return project_noise_pair(in.rho_plus_fn(x), in.rho_minus_fn(x));
}

NoisyPosterior NoisyPosterior::from_model(ModelPtr model) {
    NoisyPosterior p;
    p.eta_rho_fn = [model = std::move(model)](std::span<const double> x) {
        return std::clamp(model->score(x), 0.0, 1.0);
    };
    return p;
}

NoisyPosterior NoisyPosterior::from_function(std::function<double(std::span<const double>)> fn) {
    NoisyPosterior p;
    p.eta_rho_fn = [fn = std::move(fn)](std::span<const double> x) {
        return std::clamp(fn(x), 0.0, 1.0);
    };
    return p;
}

double noisy_posterior_forward(double eta, double rho_plus, double rho_minus) {
    if (rho_plus + rho_minus >= 1.0) {
        throw InvalidNoiseError("noisy_posterior_forward: rho_plus + rho_minus must be < 1");
    }
    return (1.0 - rho_plus - rho_minus) * eta + rho_minus;
}

double pseudo_posterior(double eta_rho, double rho_plus, double rho_minus) {
    const double denom = std::max(1.0 - rho_plus - rho_minus, kNoiseProjectionDelta);
    return std::clamp((eta_rho - rho_minus) / denom, 0.0, 1.0);
}

double pseudo_posterior(double eta_rho, const NoisePair& pair) {
    return pseudo_posterior(eta_rho, pair.rho_plus, pair.rho_minus);
}

ClassNoise estimate_class_noise(const AuditedDataset& audited) {
    validate_dataset(audited);
    std::size_t n_pos = 0, n_neg = 0, flip_pos = 0, flip_neg = 0;
    for (std::size_t i = 0; i < audited.clean_labels.size(); ++i) {
        if (audited.clean_labels[i] == 1) {
            ++n_pos;
            if (audited.noisy_labels[i] != 1) ++flip_pos;
        } else {
            ++n_neg;
            if (audited.noisy_labels[i] != -1) ++flip_neg;
        }
    }
    const double rp = static_cast<double>(flip_pos) / static_cast<double>(n_pos);
    const double rm = static_cast<double>(flip_neg) / static_cast<double>(n_neg);
    const NoisePair proj = project_noise_pair(rp, rm);
    return ClassNoise{proj.rho_plus, proj.rho_minus};
}

namespace {

// Fits the per-class mismatch regression. Output clipped to [0, 1 - 1e-6];
// 0 stays 0 so zero-mismatch classes give an exactly-zero rate function.
std::function<double(std::span<const double>)> fit_rate_fn(const FeatureMatrix& sub,
                                                           const std::vector<double>& targets,
                                                           const LearnerSpec& spec, Rng rng) {
    ModelPtr model = fit_regressor(sub, targets, spec, rng);
    bool all_zero = true;
    for (double t : targets) {
        if (t != 0.0) {
            all_zero = false;
            break;
        }
    }
    if (all_zero) {
        return [](std::span<const double>) { return 0.0; };
    }
    return [model](std::span<const double> x) {
        return std::clamp(model->score(x), 0.0, kRhoClipHigh);
    };
}

}  // namespace

InstanceNoise estimate_instance_noise(const AuditedDataset& audited, const LearnerSpec& spec,
                                      Rng rng) {
    validate_dataset(audited);
    const std::size_t n = audited.features.rows;
    const std::size_t d = audited.features.dim;
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n; ++i) {
        (audited.clean_labels[i] == 1 ? pos : neg).push_back(i);
    }
    if (pos.size() < kInstanceNoiseMinRows || neg.size() < kInstanceNoiseMinRows) {
        throw MissingClassError("estimate_instance_noise: a clean class has too few rows");
    }

    auto subset = [&](const std::vector<std::size_t>& idx) {
        FeatureMatrix sub(idx.size(), d);
        std::vector<double> t(idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r) {
            std::copy_n(audited.features.row(idx[r]).data(), d, sub.row(r).data());
            t[r] = audited.noisy_labels[idx[r]] != audited.clean_labels[idx[r]] ? 1.0 : 0.0;
        }
        return std::make_pair(std::move(sub), std::move(t));
    };

    auto [sub_pos, t_pos] = subset(pos);
    auto [sub_neg, t_neg] = subset(neg);
    InstanceNoise out;
    out.rho_plus_fn = fit_rate_fn(sub_pos, t_pos, spec, rng.derive(1));
    out.rho_minus_fn = fit_rate_fn(sub_neg, t_neg, spec, rng.derive(2));
    return out;
}

NoisyPosterior estimate_noisy_posterior(const NoisyDataset& noisy, const LearnerSpec& spec,
                                        Rng rng) {
    if (noisy.features.rows == 0) throw EmptyDatasetError("estimate_noisy_posterior: empty dataset");
    validate_dataset(noisy);
    std::vector<double> targets(noisy.features.rows);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        targets[i] = noisy.noisy_labels[i] == 1 ? 1.0 : 0.0;
    }
    return NoisyPosterior::from_model(fit_regressor(noisy.features, targets, spec, rng));
}

}  // namespace bofuse
