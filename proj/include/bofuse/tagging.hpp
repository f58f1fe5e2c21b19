#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bofuse/dataset.hpp"
#include "bofuse/learners.hpp"
#include "bofuse/noise.hpp"
#include "bofuse/purify.hpp"
#include "bofuse/rng.hpp"

namespace bofuse {

// Expert labeler: draws y ~ Bernoulli(eta(x)) mapped to {-1,+1}, so queried
// labels follow the true conditional label distribution. Owns its rng stream
// and counts queries; single-consumer.
class ExpertOracle {
public:
    ExpertOracle(std::function<double(std::span<const double>)> eta, Rng rng)
        : eta_(std::move(eta)), rng_(rng) {}

    Label query(std::span<const double> x) {
        ++queries_;
        return rng_.bernoulli(eta_(x)) ? 1 : -1;
    }
    std::size_t queries() const { return queries_; }

private:
    std::function<double(std::span<const double>)> eta_;
    Rng rng_;
    std::size_t queries_ = 0;
};

struct QueryLedger {
    std::vector<std::size_t> indices;
    std::vector<Label> labels;
    std::size_t cost() const { return indices.size(); }
};

enum class TagMode { AT, PT };

enum class LabelSource : unsigned char { bo, expert, pseudo };

// The fused training set over all n noisy-set covariates. Extracted samples
// carry their BO labels; boundary samples carry either expert labels (AT) or
// cached eta_pse values redrawn per epoch (PT).
struct FusedTrainingSet {
    FeatureMatrix features;
    TagMode mode = TagMode::AT;
    std::vector<LabelSource> source;      // per sample
    std::vector<Label> static_labels;     // valid where source != pseudo
    std::vector<double> pseudo_posterior; // valid where source == pseudo

    std::size_t size() const { return source.size(); }
};

// Queries the expert for every boundary sample (ascending index order).
std::pair<FusedTrainingSet, QueryLedger> pro_at_tag(const Partition& p, const NoisyDataset& noisy,
                                                    ExpertOracle& oracle);

// Caches eta_pse for every boundary sample; no queries.
FusedTrainingSet pro_pt_tag(const Partition& p, const NoisyDataset& noisy,
                            const NoisyPosterior& eta_rho, const NoiseModel& noise);

// Queries the `query_fraction` most ambiguous boundary samples (smallest
// |s_i| first, index ties ascending) and pseudo-tags the rest. fraction 0
// matches pro_pt_tag, fraction 1 matches pro_at_tag.
std::pair<FusedTrainingSet, QueryLedger> pro_hybrid_tag(const Partition& p,
                                                        const NoisyDataset& noisy,
                                                        ExpertOracle& oracle,
                                                        const NoisyPosterior& eta_rho,
                                                        const NoiseModel& noise,
                                                        double query_fraction);

// Static provider over the fused labels; ModeMismatchError if any sample is
// pseudo-tagged (those need the dynamic provider below).
LabelProvider fused_label_provider(const FusedTrainingSet& fused);

// Dynamic Pro-PT provider: boundary labels are redrawn each epoch via
// y = 2*I(u < eta_pse) - 1 with a fresh uniform per (epoch, sample); static
// labels never change. ModeMismatchError when mode is AT.
LabelProvider pt_label_provider(const FusedTrainingSet& fused, Rng rng);

void write_ledger_csv(const QueryLedger& ledger, const std::string& path);

}  // namespace bofuse
