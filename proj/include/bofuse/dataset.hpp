#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bofuse/errors.hpp"
#include "bofuse/rng.hpp"

namespace bofuse {

// Labels are {-1, +1} everywhere; the 0/1 encoding needed by MSE regression
// is computed on the fly where required.
using Label = int;

inline Label sign_label(double v) { return v >= 0.0 ? 1 : -1; }  // sign(0) := +1

// Dense row-major feature matrix, one sample per row.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t dim = 0;
    std::vector<double> values;  // rows * dim, row-major

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t r, std::size_t d)
        : rows(r), dim(d), values(r * d, 0.0) {}

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * dim, dim};
    }
    std::span<double> row(std::size_t i) {
        return {values.data() + i * dim, dim};
    }
    double& at(std::size_t i, std::size_t j) { return values[i * dim + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * dim + j]; }
};

// The large noisy sample {x, y_noisy}.
struct NoisyDataset {
    FeatureMatrix features;
    std::vector<Label> noisy_labels;
};

// The small audited sample carrying (x, y_clean, y_noisy) triples.
struct AuditedDataset {
    FeatureMatrix features;
    std::vector<Label> clean_labels;
    std::vector<Label> noisy_labels;
};

void validate_dataset(const NoisyDataset& ds);
void validate_dataset(const AuditedDataset& ds);

// k disjoint index folds covering 0..n-1, sizes differing by at most one.
// Random permutation followed by contiguous chunking.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, Rng rng);

// CSV schema: header `x0,...,x{d-1},y_noisy[,y_clean]`, labels written as -1/1.
void write_csv(const NoisyDataset& ds, const std::string& path);
void write_csv(const AuditedDataset& ds, const std::string& path);
NoisyDataset read_noisy_csv(const std::string& path);
AuditedDataset read_audited_csv(const std::string& path);

}  // namespace bofuse
