#include "bofuse/stumps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bofuse/errors.hpp"

namespace bofuse {

namespace {

// Best least-squares stump for the residual vector. Split candidates are the
// midpoints between consecutive sorted feature values.
BoostedStumps::Stump fit_stump(const FeatureMatrix& x,
                               const std::vector<std::vector<std::size_t>>& order,
                               const std::vector<double>& resid) {
    const std::size_t n = x.rows;
    double rsum = 0.0;
    for (double r : resid) rsum += r;

    BoostedStumps::Stump best;
    best.feature = 0;
    best.threshold = -std::numeric_limits<double>::infinity();
    best.left = 0.0;
    best.right = rsum / static_cast<double>(n);
    double best_score = rsum * rsum / static_cast<double>(n);

    for (std::size_t j = 0; j < x.dim; ++j) {
        const auto& ord = order[j];
        double lsum = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            lsum += resid[ord[k]];
            const double a = x.at(ord[k], j), b = x.at(ord[k + 1], j);
            if (a == b) continue;
            const double nl = static_cast<double>(k + 1);
            const double nr = static_cast<double>(n - k - 1);
            const double rs = rsum - lsum;
            const double score = lsum * lsum / nl + rs * rs / nr;
            if (score > best_score) {
                best_score = score;
                best.feature = j;
                best.threshold = 0.5 * (a + b);
                best.left = lsum / nl;
                best.right = rs / nr;
            }
        }
    }
    return best;
}

}  // namespace

void BoostedStumps::train(const FeatureMatrix& features, const LabelProvider& labels,
                          LossKind loss, std::size_t rounds, double shrinkage) {
    const std::size_t n = features.rows;
    if (n == 0) throw EmptyDatasetError("boosted stumps: empty training set");
    dim_ = features.dim;
    shrinkage_ = shrinkage;
    base_ = 0.0;
    stumps_.clear();

    std::vector<std::vector<std::size_t>> order(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        order[j].resize(n);
        std::iota(order[j].begin(), order[j].end(), std::size_t{0});
        std::sort(order[j].begin(), order[j].end(),
                  [&](std::size_t a, std::size_t b) { return features.at(a, j) < features.at(b, j); });
    }

    std::vector<double> f(n, 0.0), resid(n), y(n);
    for (std::uint64_t r = 0; r < rounds; ++r) {
        double loss_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<double>(labels.at(r, i));
        for (std::size_t i = 0; i < n; ++i) {
            const double m = y[i] * f[i];
            switch (loss) {
                case LossKind::hinge:
                    loss_sum += std::max(1.0 - m, 0.0);
                    resid[i] = m < 1.0 ? y[i] : 0.0;
                    break;
                case LossKind::sigmoid: {
                    const double th = std::tanh(m);
                    loss_sum += 1.0 - th;
                    resid[i] = y[i] * (1.0 - th * th);
                    break;
                }
                case LossKind::mse: {
                    const double t = (y[i] + 1.0) / 2.0;
                    loss_sum += (t - f[i]) * (t - f[i]);
                    resid[i] = 2.0 * (t - f[i]);
                    break;
                }
            }
        }
        last_loss = loss_sum / static_cast<double>(n);
        if (!std::isfinite(last_loss)) {
            throw DivergedTrainingError("boosted stumps: non-finite loss");
        }
        const Stump s = fit_stump(features, order, resid);
        stumps_.push_back(s);
        for (std::size_t i = 0; i < n; ++i) {
            f[i] += shrinkage_ * (features.at(i, s.feature) < s.threshold ? s.left : s.right);
        }
    }
}

double BoostedStumps::value(std::span<const double> x) const {
    double f = base_;
    for (const auto& s : stumps_) {
        f += shrinkage_ * (x[s.feature] < s.threshold ? s.left : s.right);
    }
    return f;
}

}  // namespace bofuse
