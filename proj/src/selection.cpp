#include "bofuse/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "bofuse/errors.hpp"
#include "bofuse/metrics.hpp"
#include "bofuse/purify.hpp"

namespace bofuse {

void TauGrid::validate() const {
    if (candidates.empty()) throw Error("tau grid must be nonempty");
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!(candidates[i] >= 0.0)) throw Error("tau candidates must be non-negative");
        if (i > 0 && !(candidates[i] > candidates[i - 1])) {
            throw Error("tau grid must be strictly ascending");
        }
    }
}

namespace {

AuditedDataset gather_audited(const AuditedDataset& src, const std::vector<std::size_t>& idx) {
    AuditedDataset out;
    out.features = FeatureMatrix(idx.size(), src.features.dim);
    out.clean_labels.resize(idx.size());
    out.noisy_labels.resize(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        std::copy_n(src.features.row(idx[r]).data(), src.features.dim, out.features.row(r).data());
        out.clean_labels[r] = src.clean_labels[idx[r]];
        out.noisy_labels[r] = src.noisy_labels[idx[r]];
    }
    return out;
}

}  // namespace

CvReport select_tau_cv(const TauGrid& grid, const NoisyDataset& noisy,
                       const AuditedDataset& audited, TagMode mode, const CvSpecs& specs,
                       ExpertOracle* cv_oracle, Rng rng) {
    grid.validate();
    validate_dataset(noisy);
    validate_dataset(audited);
    if (mode == TagMode::AT && cv_oracle == nullptr) {
        throw ModeMismatchError("select_tau_cv: AT mode needs an expert oracle");
    }
    const std::size_t k = specs.folds;
    const auto folds = kfold_split(audited.features.rows, k, rng.derive(0x666f6c64));

    // Algorithm reuses one eta_rho fit across folds
    const NoisyPosterior eta_rho =
        estimate_noisy_posterior(noisy, specs.nuisance, rng.derive(0x657461));

    CvReport report;
    report.taus = grid.candidates;
    report.fold_accuracy.assign(grid.candidates.size(), std::vector<double>(k, 0.0));

    for (std::size_t fold = 0; fold < k; ++fold) {
        std::vector<std::size_t> train_idx;
        for (std::size_t f = 0; f < k; ++f) {
            if (f == fold) continue;
            train_idx.insert(train_idx.end(), folds[f].begin(), folds[f].end());
        }
        std::sort(train_idx.begin(), train_idx.end());
        const AuditedDataset train_fold = gather_audited(audited, train_idx);
        {
            bool pos = false, neg = false;
            for (Label y : train_fold.clean_labels) (y == 1 ? pos : neg) = true;
            if (!pos || !neg) {
                throw MissingClassError("select_tau_cv: fold " + std::to_string(fold) +
                                        " training split lacks a clean class");
            }
        }
        NoiseModel noise;
        if (specs.noise_estimator == NoiseEstimatorKind::class_counts) {
            noise = estimate_class_noise(train_fold);
        } else {
            noise = estimate_instance_noise(train_fold, specs.noise_learner,
                                            rng.derive(0x726f, fold));
        }

        const AuditedDataset val_fold = gather_audited(audited, folds[fold]);
        for (std::size_t j = 0; j < grid.candidates.size(); ++j) {
            const Partition part = extract_bo(noisy, eta_rho, noise, {grid.candidates[j]});
            ModelPtr model;
            const Rng fit_rng = rng.derive(0x666974, fold * 1000 + j);
            if (mode == TagMode::AT) {
                auto [fused, ledger] = pro_at_tag(part, noisy, *cv_oracle);
                model = fit_classifier(fused.features, fused_label_provider(fused), specs.loss,
                                       specs.final_learner, fit_rng);
            } else {
                const FusedTrainingSet fused = pro_pt_tag(part, noisy, eta_rho, noise);
                model = fit_classifier(fused.features, pt_label_provider(fused, rng.derive(0x7074, fold * 1000 + j)),
                                       specs.loss, specs.final_learner, fit_rng);
            }
            const auto pred = predict_labels(*model, val_fold.features);
            report.fold_accuracy[j][fold] = accuracy(pred, val_fold.clean_labels);
        }
    }

    report.mean_accuracy.resize(grid.candidates.size());
    for (std::size_t j = 0; j < grid.candidates.size(); ++j) {
        double s = 0.0;
        for (double a : report.fold_accuracy[j]) s += a;
        report.mean_accuracy[j] = s / static_cast<double>(k);
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < report.mean_accuracy.size(); ++j) {
        if (report.mean_accuracy[j] > report.mean_accuracy[best]) best = j;  // ties: smallest tau
    }
    report.tau_star = grid.candidates[best];
    return report;
}

void write_cv_csv(const CvReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "tau,fold,accuracy\n";
    char buf[40];
    for (std::size_t j = 0; j < report.taus.size(); ++j) {
        for (std::size_t f = 0; f < report.fold_accuracy[j].size(); ++f) {
            std::snprintf(buf, sizeof(buf), "%.17g", report.fold_accuracy[j][f]);
            out << report.taus[j] << "," << f << "," << buf << "\n";
        }
    }
}

void write_cv_json(const CvReport& report, const std::string& path) {
    nlohmann::json j;
    j["tau_star"] = report.tau_star;
    j["taus"] = report.taus;
    j["mean_accuracy"] = report.mean_accuracy;
    j["fold_accuracy"] = report.fold_accuracy;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace bofuse
