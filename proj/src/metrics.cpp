#include "bofuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bofuse/errors.hpp"

namespace bofuse {

double excess_risk_mc(const ScoringModel& model, const FeatureMatrix& eval_features,
                      const std::function<double(std::span<const double>)>& oracle_eta) {
    const auto scores = score_all(model, eval_features);
    double total = 0.0;
    for (std::size_t i = 0; i < eval_features.rows; ++i) {
        const double eta = oracle_eta(eval_features.row(i));
        const Label pred = sign_label(scores[i]);
        const double risk = pred == 1 ? 1.0 - eta : eta;
        total += risk - std::min(eta, 1.0 - eta);
    }
    return eval_features.rows == 0 ? 0.0 : total / static_cast<double>(eval_features.rows);
}

double auc(const std::vector<double>& scores, const std::vector<Label>& labels) {
    if (scores.size() != labels.size()) throw LengthMismatchError("auc: size mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (Label y : labels) n_pos += y == 1;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw MissingClassError("auc: both classes required");

    // midranks handle ties exactly (each tied pair contributes 1/2)
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) rank_sum_pos += midrank;
        }
        i = j;
    }
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    const double u_stat = rank_sum_pos - np * (np + 1.0) / 2.0;
    return u_stat / (np * nn);
}

double f1(const std::vector<Label>& pred, const std::vector<Label>& truth) {
    if (pred.size() != truth.size()) throw LengthMismatchError("f1: size mismatch");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] == 1 && truth[i] == 1) ++tp;
        if (pred[i] == 1 && truth[i] == -1) ++fp;
        if (pred[i] == -1 && truth[i] == 1) ++fn;
    }
    const std::size_t denom = 2 * tp + fp + fn;
    return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double pr_auc(const std::vector<double>& scores, const std::vector<Label>& labels) {
    if (scores.size() != labels.size()) throw LengthMismatchError("pr_auc: size mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (Label y : labels) n_pos += y == 1;
    if (n_pos == 0) throw MissingClassError("pr_auc: positives required");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    double area = 0.0;
    double prev_recall = 0.0;
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) ++tp; else ++fp;
        }
        const double recall = static_cast<double>(tp) / static_cast<double>(n_pos);
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    return area;
}

double accuracy(const std::vector<Label>& pred, const std::vector<Label>& truth) {
    if (pred.size() != truth.size()) throw LengthMismatchError("accuracy: size mismatch");
    if (pred.empty()) return 0.0;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) agree += pred[i] == truth[i];
    return static_cast<double>(agree) / static_cast<double>(pred.size());
}

}  // namespace bofuse
