#include "bofuse/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bofuse/errors.hpp"
#include "bofuse/kernel_smoother.hpp"
#include "bofuse/mlp.hpp"
#include "bofuse/stumps.hpp"

namespace bofuse {

void LearnerSpec::validate() const {
    switch (kind) {
        case LearnerKind::mlp:
            if (hidden.empty()) throw Error("mlp spec needs at least one hidden layer");
            for (std::size_t h : hidden) {
                if (h == 0) throw Error("mlp hidden widths must be positive");
            }
            if (batch == 0 || !(step_size > 0.0)) throw Error("mlp batch/step must be positive");
            break;
        case LearnerKind::kernel:
            if (!(bandwidth > 0.0)) throw Error("kernel bandwidth must be positive");
            break;
        case LearnerKind::boosted_stumps:
            if (rounds == 0 || !(shrinkage > 0.0)) throw Error("stump rounds/shrinkage must be positive");
            break;
    }
}

LabelProvider LabelProvider::constant(std::vector<Label> labels) {
    LabelProvider p;
    p.size = labels.size();
    p.per_epoch = false;
    p.at = [data = std::move(labels)](std::uint64_t, std::size_t i) { return data[i]; };
    return p;
}

std::vector<double> score_all(const ScoringModel& model, const FeatureMatrix& features) {
    if (features.dim != model.input_dim()) {
        throw DimMismatchError("feature dim " + std::to_string(features.dim) +
                               " does not match model dim " + std::to_string(model.input_dim()));
    }
    std::vector<double> out(features.rows);
    for (std::size_t i = 0; i < features.rows; ++i) out[i] = model.score(features.row(i));
    return out;
}

namespace {

class MlpModel final : public ScoringModel {
public:
    MlpModel(Mlp net, bool clip01) : net_(std::move(net)), clip01_(clip01) {}
    double score(std::span<const double> x) const override {
        const double v = net_.forward(x);
        return clip01_ ? std::clamp(v, 0.0, 1.0) : v;
    }
    std::size_t input_dim() const override { return net_.input_dim(); }

private:
    Mlp net_;
    bool clip01_;
};

class KernelModel final : public ScoringModel {
public:
    KernelModel(KernelSmoother s) : smoother_(std::move(s)) {}
    double score(std::span<const double> x) const override {
        return std::clamp(smoother_.value(x), 0.0, 1.0);
    }
    std::size_t input_dim() const override { return smoother_.input_dim(); }

private:
    KernelSmoother smoother_;
};

class StumpModel final : public ScoringModel {
public:
    StumpModel(BoostedStumps s) : booster_(std::move(s)) {}
    double score(std::span<const double> x) const override { return booster_.value(x); }
    std::size_t input_dim() const override { return booster_.input_dim(); }

private:
    BoostedStumps booster_;
};

}  // namespace

ModelPtr fit_regressor(const FeatureMatrix& features, const std::vector<double>& targets,
                       const LearnerSpec& spec, Rng rng) {
    spec.validate();
    if (features.rows == 0) throw EmptyDatasetError("fit_regressor: empty dataset");
    if (targets.size() != features.rows) {
        throw LengthMismatchError("fit_regressor: targets/rows mismatch");
    }
    if (spec.kind == LearnerKind::kernel) {
        auto m = std::make_shared<KernelModel>(KernelSmoother(features, targets, spec.bandwidth));
        return m;
    }
    if (spec.kind != LearnerKind::mlp) {
        throw Error("fit_regressor supports mlp and kernel learners");
    }
    // logistic output keeps probability regression inside (0,1)
    Mlp net(features.dim, spec.hidden, Mlp::Output::logistic, rng);
    net.train(features, [&](std::uint64_t, std::size_t i) { return targets[i]; },
              LossKind::mse, spec.epochs, spec.batch, spec.step_size, rng);
    auto m = std::make_shared<MlpModel>(std::move(net), /*clip01=*/true);
    m->epochs_run = spec.epochs;
    return m;
}

ModelPtr fit_classifier(const FeatureMatrix& features, const LabelProvider& labels,
                        LossKind loss, const LearnerSpec& spec, Rng rng) {
    spec.validate();
    if (features.rows == 0) throw EmptyDatasetError("fit_classifier: empty dataset");
    if (labels.size != features.rows) {
        throw LengthMismatchError("fit_classifier: label provider size mismatch");
    }
    if (loss == LossKind::mse) throw Error("fit_classifier requires hinge or sigmoid loss");

    if (spec.kind == LearnerKind::boosted_stumps) {
        BoostedStumps booster;
        booster.train(features, labels, loss, spec.rounds, spec.shrinkage);
        auto m = std::make_shared<StumpModel>(std::move(booster));
        m->epochs_run = spec.rounds;
        return m;
    }
    if (spec.kind != LearnerKind::mlp) {
        throw Error("fit_classifier supports mlp and boosted_stumps learners");
    }
    Mlp net(features.dim, spec.hidden, Mlp::Output::linear, rng);
    net.train(features,
              [&](std::uint64_t e, std::size_t i) { return static_cast<double>(labels.at(e, i)); },
              loss, spec.epochs, spec.batch, spec.step_size, rng);
    const double tl = net.last_epoch_loss;
    auto m = std::make_shared<MlpModel>(std::move(net), /*clip01=*/false);
    m->training_loss = tl;
    m->epochs_run = spec.epochs;
    return m;
}

std::vector<Label> predict_labels(const ScoringModel& model, const FeatureMatrix& features) {
    const auto scores = score_all(model, features);
    std::vector<Label> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) out[i] = sign_label(scores[i]);
    return out;
}

double select_kernel_bandwidth(const FeatureMatrix& features, const std::vector<double>& targets,
                               const std::vector<double>& grid, Rng rng, std::size_t folds) {
    if (grid.empty()) throw Error("bandwidth grid must be nonempty");
    if (features.rows < folds) throw TooFewSamplesError("too few samples for bandwidth CV");
    const auto fold_idx = kfold_split(features.rows, folds, rng);

    double best_h = grid.front();
    double best_mse = std::numeric_limits<double>::infinity();
    for (double h : grid) {
        double total = 0.0;
        for (const auto& val : fold_idx) {
            std::vector<char> in_val(features.rows, 0);
            for (std::size_t i : val) in_val[i] = 1;
            FeatureMatrix tr(features.rows - val.size(), features.dim);
            std::vector<double> tr_t;
            tr_t.reserve(tr.rows);
            std::size_t r = 0;
            for (std::size_t i = 0; i < features.rows; ++i) {
                if (in_val[i]) continue;
                std::copy_n(features.row(i).data(), features.dim, tr.row(r).data());
                tr_t.push_back(targets[i]);
                ++r;
            }
            KernelSmoother s(tr, tr_t, h);
            double se = 0.0;
            for (std::size_t i : val) {
                const double p = s.value(features.row(i));
                se += (p - targets[i]) * (p - targets[i]);
            }
            total += se / static_cast<double>(val.size());
        }
        if (total < best_mse) {
            best_mse = total;
            best_h = h;
        }
    }
    return best_h;
}

}  // namespace bofuse
