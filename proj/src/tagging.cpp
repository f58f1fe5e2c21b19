#include "bofuse/tagging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "bofuse/errors.hpp"

namespace bofuse {

namespace {

FusedTrainingSet fused_base(const Partition& p, const NoisyDataset& noisy, TagMode mode) {
    FusedTrainingSet f;
    f.features = noisy.features;
    f.mode = mode;
    const std::size_t n = noisy.features.rows;
    f.source.assign(n, LabelSource::pseudo);
    f.static_labels.assign(n, 0);
    f.pseudo_posterior.assign(n, 0.0);
    for (std::size_t k = 0; k < p.bo_indices.size(); ++k) {
        f.source[p.bo_indices[k]] = LabelSource::bo;
        f.static_labels[p.bo_indices[k]] = p.bo_labels[k];
    }
    return f;
}

}  // namespace

std::pair<FusedTrainingSet, QueryLedger> pro_at_tag(const Partition& p, const NoisyDataset& noisy,
                                                    ExpertOracle& oracle) {
    FusedTrainingSet f = fused_base(p, noisy, TagMode::AT);
    QueryLedger ledger;
    for (std::size_t i : p.boundary_indices) {
        const Label y = oracle.query(noisy.features.row(i));
        f.source[i] = LabelSource::expert;
        f.static_labels[i] = y;
        ledger.indices.push_back(i);
        ledger.labels.push_back(y);
    }
    return {std::move(f), std::move(ledger)};
}

FusedTrainingSet pro_pt_tag(const Partition& p, const NoisyDataset& noisy,
                            const NoisyPosterior& eta_rho, const NoiseModel& noise) {
    FusedTrainingSet f = fused_base(p, noisy, TagMode::PT);
    for (std::size_t i : p.boundary_indices) {
        const auto x = noisy.features.row(i);
        f.source[i] = LabelSource::pseudo;
        f.pseudo_posterior[i] = pseudo_posterior(eta_rho(x), noise_at(noise, x));
    }
    return f;
}

std::pair<FusedTrainingSet, QueryLedger> pro_hybrid_tag(const Partition& p,
                                                        const NoisyDataset& noisy,
                                                        ExpertOracle& oracle,
                                                        const NoisyPosterior& eta_rho,
                                                        const NoiseModel& noise,
                                                        double query_fraction) {
    if (!(query_fraction >= 0.0 && query_fraction <= 1.0)) {
        throw Error("query_fraction must be in [0,1]");
    }
    FusedTrainingSet f = fused_base(p, noisy, TagMode::PT);
    QueryLedger ledger;

    // most ambiguous first: smallest |s_i|, index ties ascending
    std::vector<std::size_t> order = p.boundary_indices;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = std::abs(p.margin_scores[a]), fb = std::abs(p.margin_scores[b]);
        if (fa != fb) return fa < fb;
        return a < b;
    });
    const std::size_t n_query =
        static_cast<std::size_t>(std::floor(query_fraction * static_cast<double>(order.size())));
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t i = order[k];
        const auto x = noisy.features.row(i);
        if (k < n_query) {
            const Label y = oracle.query(x);
            f.source[i] = LabelSource::expert;
            f.static_labels[i] = y;
            ledger.indices.push_back(i);
            ledger.labels.push_back(y);
        } else {
            f.pseudo_posterior[i] = pseudo_posterior(eta_rho(x), noise_at(noise, x));
        }
    }
    if (n_query == order.size()) f.mode = TagMode::AT;
    return {std::move(f), std::move(ledger)};
}

LabelProvider fused_label_provider(const FusedTrainingSet& fused) {
    for (LabelSource s : fused.source) {
        if (s == LabelSource::pseudo) {
            throw ModeMismatchError("fused set has pseudo-tagged samples; use pt_label_provider");
        }
    }
    return LabelProvider::constant(fused.static_labels);
}

LabelProvider pt_label_provider(const FusedTrainingSet& fused, Rng rng) {
    if (fused.mode != TagMode::PT) {
        throw ModeMismatchError("pt_label_provider requires a PT-mode fused set");
    }
    LabelProvider p;
    p.size = fused.size();
    p.per_epoch = true;
    const std::uint64_t key = mix64(rng.seed(), rng.stream());
    p.at = [key, src = fused.source, lab = fused.static_labels,
            pse = fused.pseudo_posterior](std::uint64_t epoch, std::size_t i) -> Label {
        if (src[i] != LabelSource::pseudo) return lab[i];
        return u01_at(key, epoch, i) < pse[i] ? 1 : -1;
    };
    return p;
}

void write_ledger_csv(const QueryLedger& ledger, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "index,label\n";
    for (std::size_t k = 0; k < ledger.indices.size(); ++k) {
        out << ledger.indices[k] << "," << ledger.labels[k] << "\n";
    }
}

}  // namespace bofuse
