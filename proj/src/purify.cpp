#include "bofuse/purify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "bofuse/errors.hpp"

namespace bofuse {

namespace {

std::vector<double> margin_scores(const NoisyDataset& noisy, const NoisyPosterior& eta_rho,
                                  const NoiseModel& noise) {
    const std::size_t n = noisy.features.rows;
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = noisy.features.row(i);
        const NoisePair rho = noise_at(noise, x);
        const double threshold = 0.5 - 0.5 * (rho.rho_plus - rho.rho_minus);
        s[i] = eta_rho(x) - threshold;
    }
    return s;
}

}  // namespace

Partition extract_bo(const NoisyDataset& noisy, const NoisyPosterior& eta_rho,
                     const NoiseModel& noise, SecurityMargin tau) {
    if (!(tau.tau >= 0.0) || !std::isfinite(tau.tau)) {
        throw Error("security margin must be finite and non-negative");
    }
    Partition p;
    p.tau = tau;
    p.margin_scores = margin_scores(noisy, eta_rho, noise);
    const std::size_t n = p.margin_scores.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double s = p.margin_scores[i];
        if (std::abs(s) <= tau.tau) {
            p.boundary_indices.push_back(i);
        } else {
            p.bo_indices.push_back(i);
            p.bo_labels.push_back(s > 0.0 ? 1 : -1);
        }
    }
    return p;
}

ExtractionStats extraction_stats(
    const Partition& p, const FeatureMatrix& features,
    const std::function<double(std::span<const double>)>* oracle_eta) {
    ExtractionStats st;
    st.m = p.bo_indices.size();
    const std::size_t n = p.margin_scores.size();
    st.fraction = n == 0 ? 0.0 : static_cast<double>(st.m) / static_cast<double>(n);
    if (oracle_eta && st.m > 0) {
        std::size_t agree = 0;
        for (std::size_t k = 0; k < st.m; ++k) {
            const auto x = features.row(p.bo_indices[k]);
            const Label bayes = sign_label((*oracle_eta)(x)-0.5);
            if (bayes == p.bo_labels[k]) ++agree;
        }
        st.purity = static_cast<double>(agree) / static_cast<double>(st.m);
    }
    return st;
}

SecurityMargin budget_margin_search(const NoisyDataset& noisy, const NoisyPosterior& eta_rho,
                                    const NoiseModel& noise, std::size_t budget) {
    auto s = margin_scores(noisy, eta_rho, noise);
    const std::size_t n = s.size();
    if (budget > n) throw Error("budget exceeds sample count");
    for (double& v : s) v = std::abs(v);
    std::sort(s.begin(), s.end());
    if (budget == 0) {
        return SecurityMargin{n == 0 ? 0.0 : s.front() / 2.0};
    }
    return SecurityMargin{s[budget - 1]};
}

Partition extract_bo_with_budget(const NoisyDataset& noisy, const NoisyPosterior& eta_rho,
                                 const NoiseModel& noise, std::size_t budget) {
    const std::size_t n = noisy.features.rows;
    if (budget > n) throw Error("budget exceeds sample count");
    Partition p;
    p.margin_scores = margin_scores(noisy, eta_rho, noise);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = std::abs(p.margin_scores[a]), fb = std::abs(p.margin_scores[b]);
        if (fa != fb) return fa < fb;
        return a < b;
    });
    std::vector<char> boundary(n, 0);
    for (std::size_t k = 0; k < budget; ++k) boundary[order[k]] = 1;
    p.tau.tau = budget == 0 ? (n == 0 ? 0.0 : std::abs(p.margin_scores[order[0]]) / 2.0)
                            : std::abs(p.margin_scores[order[budget - 1]]);
    for (std::size_t i = 0; i < n; ++i) {
        if (boundary[i]) {
            p.boundary_indices.push_back(i);
        } else {
            p.bo_indices.push_back(i);
            p.bo_labels.push_back(p.margin_scores[i] > 0.0 ? 1 : -1);
        }
    }
    return p;
}

void write_partition_csv(const Partition& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "index,status,bo_label,margin_score\n";
    const std::size_t n = p.margin_scores.size();
    std::vector<Label> label(n, 0);
    std::vector<char> extracted(n, 0);
    for (std::size_t k = 0; k < p.bo_indices.size(); ++k) {
        extracted[p.bo_indices[k]] = 1;
        label[p.bo_indices[k]] = p.bo_labels[k];
    }
    char buf[40];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.margin_scores[i]);
        out << i << "," << (extracted[i] ? "extracted" : "boundary") << "," << label[i] << ","
            << buf << "\n";
    }
}

}  // namespace bofuse
