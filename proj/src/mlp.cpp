#include "bofuse/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "bofuse/errors.hpp"

namespace bofuse {

namespace {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

Mlp::Mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden, Output out, Rng& rng)
    : output_(out) {
    dims_.push_back(input_dim);
    for (std::size_t h : hidden) dims_.push_back(h);
    dims_.push_back(1);

    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        LayerView v{total, total + dims_[l] * dims_[l + 1], dims_[l], dims_[l + 1]};
        total = v.b_off + v.out;
        layers_.push_back(v);
    }
    params_.assign(total, 0.0);
    // He init: keeps ReLU pre-activation variance stable across depth
    for (const auto& v : layers_) {
        const double scale = std::sqrt(2.0 / static_cast<double>(v.in));
        for (std::size_t i = 0; i < v.in * v.out; ++i) {
            params_[v.w_off + i] = scale * rng.normal();
        }
    }
    mean_.assign(input_dim, 0.0);
    inv_sd_.assign(input_dim, 1.0);
}

void Mlp::fit_standardizer(const FeatureMatrix& features) {
    const std::size_t d = features.dim, n = features.rows;
    mean_.assign(d, 0.0);
    inv_sd_.assign(d, 1.0);
    if (n == 0) return;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = features.row(i);
        for (std::size_t j = 0; j < d; ++j) mean_[j] += r[j];
    }
    for (double& m : mean_) m /= static_cast<double>(n);
    std::vector<double> var(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = features.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double c = r[j] - mean_[j];
            var[j] += c * c;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        const double sd = std::sqrt(var[j] / static_cast<double>(n));
        inv_sd_[j] = sd > 1e-12 ? 1.0 / sd : 1.0;
    }
}

double Mlp::forward_std(std::span<const double> x) const {
    std::vector<double> cur(x.begin(), x.end());
    std::vector<double> nxt;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& v = layers_[l];
        nxt.assign(v.out, 0.0);
        for (std::size_t o = 0; o < v.out; ++o) {
            const double* w = params_.data() + v.w_off + o * v.in;
            double z = params_[v.b_off + o];
            for (std::size_t k = 0; k < v.in; ++k) z += w[k] * cur[k];
            nxt[o] = (l + 1 < layers_.size()) ? std::max(z, 0.0) : z;
        }
        cur.swap(nxt);
    }
    return output_ == Output::logistic ? logistic(cur[0]) : cur[0];
}

double Mlp::forward(std::span<const double> x) const {
    std::vector<double> xs(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) xs[j] = (x[j] - mean_[j]) * inv_sd_[j];
    return forward_std(xs);
}

double Mlp::loss_and_grad(const std::vector<double>& xs, std::size_t rows,
                          const std::vector<double>& targets, LossKind loss,
                          std::vector<double>& grad) const {
    const std::size_t nl = layers_.size();
    // forward, keeping all activations
    std::vector<std::vector<double>> acts(nl + 1);
    acts[0] = xs;
    for (std::size_t l = 0; l < nl; ++l) {
        const auto& v = layers_[l];
        acts[l + 1].assign(rows * v.out, 0.0);
        const bool last = l + 1 == nl;
        for (std::size_t i = 0; i < rows; ++i) {
            const double* in = acts[l].data() + i * v.in;
            double* out = acts[l + 1].data() + i * v.out;
            for (std::size_t o = 0; o < v.out; ++o) {
                const double* w = params_.data() + v.w_off + o * v.in;
                double z = params_[v.b_off + o];
                for (std::size_t k = 0; k < v.in; ++k) z += w[k] * in[k];
                out[o] = last ? z : std::max(z, 0.0);
            }
        }
    }

    const double inv_rows = 1.0 / static_cast<double>(rows);
    double total = 0.0;
    std::vector<double> delta(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const double z = acts[nl][i];
        const double o = output_ == Output::logistic ? logistic(z) : z;
        const double t = targets[i];
        double dl;
        switch (loss) {
            case LossKind::mse: {
                const double r = o - t;
                total += r * r;
                dl = 2.0 * r;
                break;
            }
            case LossKind::hinge: {
                const double m = t * o;
                total += std::max(1.0 - m, 0.0);
                dl = m < 1.0 ? -t : 0.0;
                break;
            }
            case LossKind::sigmoid: {
                const double th = std::tanh(t * o);
                total += 1.0 - th;
                dl = -t * (1.0 - th * th);
                break;
            }
        }
        if (output_ == Output::logistic) dl *= o * (1.0 - o);
        delta[i] = dl * inv_rows;
    }

    // backward
    std::vector<double> next_delta;
    for (std::size_t li = nl; li-- > 0;) {
        const auto& v = layers_[li];
        if (li > 0) next_delta.assign(rows * v.in, 0.0);
        for (std::size_t i = 0; i < rows; ++i) {
            const double* in = acts[li].data() + i * v.in;
            const double* d = delta.data() + i * v.out;
            for (std::size_t o = 0; o < v.out; ++o) {
                const double dv = d[o];
                if (dv == 0.0) continue;
                double* gw = grad.data() + v.w_off + o * v.in;
                for (std::size_t k = 0; k < v.in; ++k) gw[k] += dv * in[k];
                grad[v.b_off + o] += dv;
                if (li > 0) {
                    const double* w = params_.data() + v.w_off + o * v.in;
                    double* nd = next_delta.data() + i * v.in;
                    for (std::size_t k = 0; k < v.in; ++k) nd[k] += dv * w[k];
                }
            }
        }
        if (li > 0) {
            // ReLU mask: post-activation > 0 iff the pre-activation was
            double* nd = next_delta.data();
            const double* a = acts[li].data();
            for (std::size_t i = 0; i < rows * v.in; ++i) {
                if (a[i] <= 0.0) nd[i] = 0.0;
            }
            delta.swap(next_delta);
        }
    }
    return total * inv_rows;
}

void Mlp::train(const FeatureMatrix& features,
                const std::function<double(std::uint64_t, std::size_t)>& targets_at,
                LossKind loss, std::size_t epochs, std::size_t batch, double step, Rng& rng) {
    const std::size_t n = features.rows;
    if (n == 0) throw EmptyDatasetError("mlp: empty training set");
    fit_standardizer(features);
    const std::size_t d = features.dim;
    std::vector<double> xs(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = features.row(i);
        for (std::size_t j = 0; j < d; ++j) xs[i * d + j] = (r[j] - mean_[j]) * inv_sd_[j];
    }

    batch = std::min(std::max<std::size_t>(batch, 1), n);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::vector<double> bx(batch * d), bt(batch), tgt(n), grad(params_.size());

    for (std::uint64_t e = 0; e < epochs; ++e) {
        for (std::size_t i = 0; i < n; ++i) tgt[i] = targets_at(e, i);
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        double epoch_loss = 0.0;
        std::size_t nb = 0;
        for (std::size_t s = 0; s < n; s += batch) {
            const std::size_t bsz = std::min(batch, n - s);
            for (std::size_t b = 0; b < bsz; ++b) {
                const std::size_t src = perm[s + b];
                std::copy_n(xs.data() + src * d, d, bx.data() + b * d);
                bt[b] = tgt[src];
            }
            std::fill(grad.begin(), grad.end(), 0.0);
            epoch_loss += loss_and_grad(bx, bsz, bt, loss, grad);
            ++nb;
            for (std::size_t p = 0; p < params_.size(); ++p) params_[p] -= step * grad[p];
        }
        last_epoch_loss = epoch_loss / static_cast<double>(nb);
        if (!std::isfinite(last_epoch_loss)) {
            throw DivergedTrainingError("mlp: non-finite loss at epoch " + std::to_string(e));
        }
    }
    for (double p : params_) {
        if (!std::isfinite(p)) throw DivergedTrainingError("mlp: non-finite parameter");
    }
}

}  // namespace bofuse
