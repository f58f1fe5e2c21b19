#include "bofuse/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bofuse/errors.hpp"

namespace bofuse {

double NoiseSpec::rho_plus_at(std::span<const double> x) const {
    switch (mechanism) {
        case NoiseMechanism::class_low: return 0.3;
        case NoiseMechanism::class_high: return 0.35;
        case NoiseMechanism::instance: return plus_base + plus_amp * logistic_fn(-x[0]);
    }
    return 0.0;
}

double NoiseSpec::rho_minus_at(std::span<const double> x) const {
    switch (mechanism) {
        case NoiseMechanism::class_low: return 0.1;
        case NoiseMechanism::class_high: return 0.15;
        case NoiseMechanism::instance: return minus_base + minus_amp * logistic_fn(x[0]);
    }
    return 0.0;
}

double inverse_u_cdf(double p) {
    // F(u) = (8 + u^3)/16 on (-2,2)  =>  u = cbrt(16 p - 8)
    return std::cbrt(16.0 * p - 8.0);
}

std::size_t example_dim(ExampleId id) {
    return id == ExampleId::ex1 ? 10 : 100;
}

namespace {

// shared U,Z,V,W block of Examples 1-3; drawn in a fixed order
struct UvwDraw {
    double u, v, w;
};

UvwDraw draw_uvw(Rng& rng) {
    const double u = inverse_u_cdf(rng.u01());
    const bool z = rng.bernoulli(0.5);
    const double v = (std::abs(u) > 0.5 && z) ? rng.uniform(0.0, 3.0) : 0.0;
    const double w = (std::abs(u) + v > 1.0 && z) ? rng.u01() : 0.0;
    return {u, v, w};
}

OracleAccess zero_noise_oracle(std::function<double(std::span<const double>)> eta) {
    OracleAccess o;
    o.eta = std::move(eta);
    o.rho_plus = [](std::span<const double>) { return 0.0; };
    o.rho_minus = [](std::span<const double>) { return 0.0; };
    return o;
}

std::function<double(std::span<const double>)> eta_for(ExampleId id) {
    if (id == ExampleId::ex3) {
        return [](std::span<const double> x) {
            double s = 0.0;
            for (double v : x) s += v * v;
            return logistic_fn(6.0 * (std::sqrt(s) - 1.0));
        };
    }
    return [](std::span<const double> x) {
        return logistic_fn(2.0 * std::sin(2.0 * x[0]) + x[1]);
    };
}

}  // namespace

CleanSample gen_clean(const GeneratorSpec& spec) {
    if (spec.n < 1) throw Error("generator needs n >= 1");
    const std::size_t d = example_dim(spec.example);
    Rng rng(spec.seed, 0x53494dULL + static_cast<std::uint64_t>(spec.example));

    CleanSample out;
    out.features = FeatureMatrix(spec.n, d);
    out.labels.resize(spec.n);
    out.oracle = zero_noise_oracle(eta_for(spec.example));

    for (std::size_t i = 0; i < spec.n; ++i) {
        auto row = out.features.row(i);
        if (spec.example == ExampleId::ex3) {
            const UvwDraw uvw = draw_uvw(rng);
            const double r = (6.0 + uvw.u + uvw.v + uvw.w) / 6.0;
            double norm2 = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                row[j] = rng.normal();
                norm2 += row[j] * row[j];
            }
            const double scale = r / std::sqrt(norm2);
            for (std::size_t j = 0; j < d; ++j) row[j] *= scale;
        } else {
            const double x1 = rng.normal();
            const UvwDraw uvw = draw_uvw(rng);
            row[0] = x1;
            row[1] = -2.0 * std::sin(2.0 * x1) + uvw.u + uvw.v + uvw.w;
            for (std::size_t j = 2; j < d; ++j) row[j] = rng.normal();
        }
        out.labels[i] = rng.bernoulli(out.oracle.eta(row)) ? 1 : -1;
    }
    return out;
}

OracleAccess attach_noise(const OracleAccess& oracle, const NoiseSpec& noise) {
    OracleAccess o = oracle;
    o.rho_plus = [noise](std::span<const double> x) { return noise.rho_plus_at(x); };
    o.rho_minus = [noise](std::span<const double> x) { return noise.rho_minus_at(x); };
    return o;
}

NoiseModel exact_noise_model(const NoiseSpec& noise) {
    if (noise.mechanism == NoiseMechanism::instance) {
        InstanceNoise in;
        in.rho_plus_fn = [noise](std::span<const double> x) { return noise.rho_plus_at(x); };
        in.rho_minus_fn = [noise](std::span<const double> x) { return noise.rho_minus_at(x); };
        return in;
    }
    NoiseSpec c = noise;
    const double rp = c.rho_plus_at({});
    const double rm = c.rho_minus_at({});
    return ClassNoise{rp, rm};
}

std::vector<Label> inject_noise(const std::vector<Label>& labels, const FeatureMatrix& features,
                                const NoiseSpec& noise, Rng rng) {
    if (labels.size() != features.rows) {
        throw LengthMismatchError("inject_noise: labels/rows mismatch");
    }
    std::vector<Label> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto x = features.row(i);
        const double rate = labels[i] == 1 ? noise.rho_plus_at(x) : noise.rho_minus_at(x);
        const bool flip = rng.bernoulli(rate);
        out[i] = flip ? -labels[i] : labels[i];
    }
    return out;
}

AuditedDataset make_audited(const FeatureMatrix& features, const std::vector<Label>& clean,
                            const std::vector<Label>& noisy, std::size_t n0, Rng rng) {
    const std::size_t n = features.rows;
    if (clean.size() != n || noisy.size() != n) {
        throw LengthMismatchError("make_audited: label/rows mismatch");
    }
    if (n0 == 0 || n0 > n) throw TooFewSamplesError("make_audited: need 1 <= n0 <= rows");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);

    AuditedDataset out;
    out.features = FeatureMatrix(n0, features.dim);
    out.clean_labels.resize(n0);
    out.noisy_labels.resize(n0);
    for (std::size_t r = 0; r < n0; ++r) {
        const std::size_t src = perm[r];
        std::copy_n(features.row(src).data(), features.dim, out.features.row(r).data());
        out.clean_labels[r] = clean[src];
        out.noisy_labels[r] = noisy[src];
    }
    return out;
}

EvalSet build_eval_set(const GeneratorSpec& spec) {
    CleanSample s = gen_clean(spec);
    return EvalSet{std::move(s.features), std::move(s.oracle)};
}

}  // namespace bofuse
