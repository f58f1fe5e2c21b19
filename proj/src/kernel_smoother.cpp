#include "bofuse/kernel_smoother.hpp"

#include <cmath>
#include <limits>

#include "bofuse/errors.hpp"

namespace bofuse {

KernelSmoother::KernelSmoother(const FeatureMatrix& features, std::vector<double> targets,
                               double bandwidth)
    : dim_(features.dim), targets_(std::move(targets)), bandwidth_(bandwidth) {
    const std::size_t n = features.rows;
    if (n == 0) throw EmptyDatasetError("kernel smoother: empty training set");
    if (targets_.size() != n) throw LengthMismatchError("kernel smoother: targets/rows mismatch");
    if (!(bandwidth > 0.0)) throw Error("kernel smoother: bandwidth must be > 0");

    mean_.assign(dim_, 0.0);
    inv_sd_.assign(dim_, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = features.row(i);
        for (std::size_t j = 0; j < dim_; ++j) mean_[j] += r[j];
    }
    for (double& m : mean_) m /= static_cast<double>(n);
    std::vector<double> var(dim_, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = features.row(i);
        for (std::size_t j = 0; j < dim_; ++j) {
            const double c = r[j] - mean_[j];
            var[j] += c * c;
        }
    }
    for (std::size_t j = 0; j < dim_; ++j) {
        const double sd = std::sqrt(var[j] / static_cast<double>(n));
        inv_sd_[j] = sd > 1e-12 ? 1.0 / sd : 1.0;
    }
    xs_.resize(n * dim_);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = features.row(i);
        for (std::size_t j = 0; j < dim_; ++j) {
            xs_[i * dim_ + j] = (r[j] - mean_[j]) * inv_sd_[j];
        }
    }
    double s = 0.0;
    for (double t : targets_) s += t;
    fallback_ = s / static_cast<double>(n);
}

double KernelSmoother::value(std::span<const double> x) const {
    std::vector<double> q(dim_);
    for (std::size_t j = 0; j < dim_; ++j) q[j] = (x[j] - mean_[j]) * inv_sd_[j];
    const double inv2h2 = 1.0 / (2.0 * bandwidth_ * bandwidth_);
    const std::size_t n = targets_.size();

    // subtract the min distance before exponentiating so far-away queries
    // do not underflow every weight
    double min_d2 = std::numeric_limits<double>::infinity();
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = xs_.data() + i * dim_;
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
            const double c = q[j] - xi[j];
            s += c * c;
        }
        d2[i] = s;
        if (s < min_d2) min_d2 = s;
    }
    if (!std::isfinite(min_d2)) return fallback_;
    double wsum = 0.0, tsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = std::exp(-(d2[i] - min_d2) * inv2h2);
        wsum += w;
        tsum += w * targets_[i];
    }
    if (wsum <= 0.0) return fallback_;
    return tsum / wsum;
}

}  // namespace bofuse
