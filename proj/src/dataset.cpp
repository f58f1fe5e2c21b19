#include "bofuse/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace bofuse {

namespace {

void check_features(const FeatureMatrix& fm) {
    if (fm.values.size() != fm.rows * fm.dim) {
        throw LengthMismatchError("feature buffer size does not match rows*dim");
    }
    if (fm.rows > 0 && fm.dim == 0) {
        throw LengthMismatchError("feature dim must be >= 1");
    }
    for (double v : fm.values) {
        if (!std::isfinite(v)) throw NonFiniteFeatureError("non-finite feature value");
    }
}

void check_labels(const std::vector<Label>& labels, std::size_t rows, const char* what) {
    if (labels.size() != rows) {
        throw LengthMismatchError(std::string(what) + ": label count does not match rows");
    }
    for (Label y : labels) {
        if (y != 1 && y != -1) {
            throw LengthMismatchError(std::string(what) + ": labels must be -1 or +1");
        }
    }
}

}  // namespace

void validate_dataset(const NoisyDataset& ds) {
    check_features(ds.features);
    check_labels(ds.noisy_labels, ds.features.rows, "noisy_labels");
}

void validate_dataset(const AuditedDataset& ds) {
    check_features(ds.features);
    check_labels(ds.clean_labels, ds.features.rows, "clean_labels");
    check_labels(ds.noisy_labels, ds.features.rows, "noisy_labels");
    bool has_pos = false, has_neg = false;
    for (Label y : ds.clean_labels) {
        if (y == 1) has_pos = true;
        if (y == -1) has_neg = true;
    }
    if (!has_pos || !has_neg) {
        throw MissingClassError("audited dataset must contain both clean classes");
    }
}

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, Rng rng) {
    if (k < 2) throw TooFewSamplesError("kfold_split requires k >= 2");
    if (n < k) throw TooFewSamplesError("kfold_split requires n >= k");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        std::swap(perm[i - 1], perm[rng.below(i)]);
    }
    std::vector<std::vector<std::size_t>> folds(k);
    const std::size_t base = n / k;
    const std::size_t extra = n % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t sz = base + (f < extra ? 1 : 0);
        folds[f].assign(perm.begin() + pos, perm.begin() + pos + sz);
        pos += sz;
    }
    return folds;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv_rows(std::ofstream& out, const FeatureMatrix& fm,
                    const std::vector<Label>& noisy, const std::vector<Label>* clean) {
    out << "x0";
    for (std::size_t j = 1; j < fm.dim; ++j) out << ",x" << j;
    out << ",y_noisy";
    if (clean) out << ",y_clean";
    out << "\n";
    for (std::size_t i = 0; i < fm.rows; ++i) {
        for (std::size_t j = 0; j < fm.dim; ++j) {
            if (j) out << ",";
            out << format_double(fm.at(i, j));
        }
        out << "," << noisy[i];
        if (clean) out << "," << (*clean)[i];
        out << "\n";
    }
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) cells.push_back(cur);
    return cells;
}

struct CsvBody {
    FeatureMatrix features;
    std::vector<Label> noisy;
    std::vector<Label> clean;
    bool has_clean = false;
};

CsvBody read_csv_body(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty csv: " + path);
    const auto header = split_line(line);
    std::size_t d = 0;
    while (d < header.size() && header[d] == "x" + std::to_string(d)) ++d;
    if (d == 0 || d >= header.size() || header[d] != "y_noisy") {
        throw IoError("unexpected csv header in " + path);
    }
    CsvBody body;
    body.has_clean = header.size() > d + 1 && header[d + 1] == "y_clean";
    std::vector<double> vals;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_line(line);
        const std::size_t expect = d + 1 + (body.has_clean ? 1 : 0);
        if (cells.size() != expect) throw IoError("bad csv row in " + path);
        for (std::size_t j = 0; j < d; ++j) vals.push_back(std::stod(cells[j]));
        body.noisy.push_back(std::stoi(cells[d]));
        if (body.has_clean) body.clean.push_back(std::stoi(cells[d + 1]));
        ++rows;
    }
    body.features.rows = rows;
    body.features.dim = d;
    body.features.values = std::move(vals);
    return body;
}

}  // namespace

void write_csv(const NoisyDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    write_csv_rows(out, ds.features, ds.noisy_labels, nullptr);
}

void write_csv(const AuditedDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    write_csv_rows(out, ds.features, ds.noisy_labels, &ds.clean_labels);
}

NoisyDataset read_noisy_csv(const std::string& path) {
    auto body = read_csv_body(path);
    NoisyDataset ds{std::move(body.features), std::move(body.noisy)};
    validate_dataset(ds);
    return ds;
}

AuditedDataset read_audited_csv(const std::string& path) {
    auto body = read_csv_body(path);
    if (!body.has_clean) throw IoError("audited csv needs a y_clean column: " + path);
    AuditedDataset ds{std::move(body.features), std::move(body.clean), std::move(body.noisy)};
    validate_dataset(ds);
    return ds;
}

}  // namespace bofuse
