#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bofuse/metrics.hpp"
#include "bofuse/rng.hpp"

using namespace bofuse;

namespace {

// fixed per-row scores, independent of feature content
class FixedScoreModel final : public ScoringModel {
public:
    FixedScoreModel(std::vector<double> scores, std::size_t dim)
        : scores_(std::move(scores)), dim_(dim) {}
    double score(std::span<const double> x) const override {
        return scores_[static_cast<std::size_t>(x[0])];
    }
    std::size_t input_dim() const override { return dim_; }

private:
    std::vector<double> scores_;
    std::size_t dim_;
};

FeatureMatrix index_features(std::size_t n) {
    FeatureMatrix fm(n, 1);
    for (std::size_t i = 0; i < n; ++i) fm.at(i, 0) = static_cast<double>(i);
    return fm;
}

// brute-force pairwise AUC
double auc_bruteforce(const std::vector<double>& s, const std::vector<Label>& y) {
    double num = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (y[i] != 1) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[j] != -1) continue;
            pairs += 1.0;
            if (s[i] > s[j]) num += 1.0;
            else if (s[i] == s[j]) num += 0.5;
        }
    }
    return num / pairs;
}

// brute-force PR step curve over every distinct threshold
double pr_auc_bruteforce(const std::vector<double>& s, const std::vector<Label>& y) {
    std::vector<double> thresholds = s;
    std::sort(thresholds.begin(), thresholds.end(), std::greater<double>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    std::size_t n_pos = 0;
    for (Label v : y) n_pos += v == 1;
    double area = 0.0, prev_recall = 0.0;
    for (double t : thresholds) {
        std::size_t tp = 0, fp = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] >= t) {
                if (y[i] == 1) ++tp;
                else ++fp;
            }
        }
        const double recall = static_cast<double>(tp) / static_cast<double>(n_pos);
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    return area;
}

}  // namespace

TEST_CASE("excess risk: Bayes classifier scores zero") {
    const auto fm = index_features(100);
    std::vector<double> etas(100);
    for (std::size_t i = 0; i < 100; ++i) etas[i] = (i % 10) / 10.0;
    auto eta_fn = [&etas](std::span<const double> x) {
        return etas[static_cast<std::size_t>(x[0])];
    };
    std::vector<double> bayes_scores(100);
    for (std::size_t i = 0; i < 100; ++i) bayes_scores[i] = etas[i] >= 0.5 ? 1.0 : -1.0;
    const FixedScoreModel bayes(bayes_scores, 1);
    CHECK(excess_risk_mc(bayes, fm, eta_fn) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("excess risk: constant +1 under eta 0.2 and 0.7") {
    const auto fm = index_features(50);
    const FixedScoreModel always_pos(std::vector<double>(50, 1.0), 1);
    auto eta02 = [](std::span<const double>) { return 0.2; };
    auto eta07 = [](std::span<const double>) { return 0.7; };
    CHECK(excess_risk_mc(always_pos, fm, eta02) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(excess_risk_mc(always_pos, fm, eta07) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("excess risk is non-negative for arbitrary scores") {
    Rng rng(4, 4);
    const auto fm = index_features(200);
    std::vector<double> scores(200), etas(200);
    for (std::size_t i = 0; i < 200; ++i) {
        scores[i] = rng.normal();
        etas[i] = rng.u01();
    }
    const FixedScoreModel model(scores, 1);
    auto eta_fn = [&etas](std::span<const double> x) {
        return etas[static_cast<std::size_t>(x[0])];
    };
    CHECK(excess_risk_mc(model, fm, eta_fn) >= 0.0);
}

TEST_CASE("auc on the worked example and the degenerate cases") {
    CHECK(auc({0.9, 0.8, 0.3}, {1, -1, 1}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(auc({0.1, 0.2, 0.8, 0.9}, {-1, -1, 1, 1}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(auc({0.5, 0.5, 0.5, 0.5}, {1, -1, 1, -1}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(auc({0.1, 0.2}, {1, 1}), MissingClassError);
}

TEST_CASE("f1 on hand-counted confusion tables") {
    CHECK(f1({1, 1, -1, -1}, {1, 1, -1, -1}) == doctest::Approx(1.0).epsilon(1e-15));
    // TP = 2, FP = 1, FN = 1 -> 2/3
    CHECK(f1({1, 1, 1, -1, -1}, {1, 1, -1, 1, -1}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(f1({-1, -1}, {-1, -1}) == 0.0);  // no positives anywhere
}

TEST_CASE("pr_auc on hand-computed curves") {
    CHECK(pr_auc({0.9, 0.8, 0.2, 0.1}, {1, 1, -1, -1}) == doctest::Approx(1.0).epsilon(1e-15));
    // single positive ranked last among k = 5
    CHECK(pr_auc({0.9, 0.8, 0.7, 0.6, 0.1}, {-1, -1, -1, -1, 1}) ==
          doctest::Approx(0.2).epsilon(1e-15));
    // all scores equal -> prevalence
    CHECK(pr_auc({0.4, 0.4, 0.4, 0.4}, {1, -1, -1, -1}) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("accuracy basics") {
    CHECK(accuracy({1, -1, 1}, {1, -1, 1}) == 1.0);
    CHECK(accuracy({1, -1}, {-1, -1}) == 0.5);
    CHECK_THROWS_AS(accuracy({1}, {1, -1}), LengthMismatchError);
}

TEST_CASE("auc and pr_auc match brute force on random instances") {
    Rng rng(99, 1);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 5 + rng.below(196);
        std::vector<double> s(n);
        std::vector<Label> y(n);
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            // quantized scores force tie groups
            s[i] = std::floor(rng.u01() * 8.0) / 8.0;
            y[i] = rng.bernoulli(0.4) ? 1 : -1;
            pos |= y[i] == 1;
            neg |= y[i] == -1;
        }
        if (!pos) y[0] = 1;
        if (!neg) y[1 % n] = -1;
        CHECK(std::abs(auc(s, y) - auc_bruteforce(s, y)) <= 1e-12);
        CHECK(std::abs(pr_auc(s, y) - pr_auc_bruteforce(s, y)) <= 1e-12);
    }
}

TEST_CASE("f1 and accuracy match confusion-matrix counting on random instances") {
    Rng rng(17, 3);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 3 + rng.below(100);
        std::vector<Label> p(n), t(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = rng.bernoulli(0.5) ? 1 : -1;
            t[i] = rng.bernoulli(0.5) ? 1 : -1;
        }
        double tp = 0, fp = 0, fn = 0, agree = 0;
        for (std::size_t i = 0; i < n; ++i) {
            tp += p[i] == 1 && t[i] == 1;
            fp += p[i] == 1 && t[i] == -1;
            fn += p[i] == -1 && t[i] == 1;
            agree += p[i] == t[i];
        }
        const double denom = 2 * tp + fp + fn;
        CHECK(f1(p, t) == doctest::Approx(denom == 0 ? 0.0 : 2 * tp / denom).epsilon(1e-15));
        CHECK(accuracy(p, t) == doctest::Approx(agree / n).epsilon(1e-15));
    }
}
