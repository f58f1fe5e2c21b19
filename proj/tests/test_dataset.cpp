#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <set>

#include "bofuse/dataset.hpp"
#include "bofuse/rng.hpp"

using namespace bofuse;

namespace {

FeatureMatrix small_features() {
    FeatureMatrix fm(3, 2);
    fm.values = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
    return fm;
}

}  // namespace

TEST_CASE("validate_dataset accepts well-formed noisy data") {
    NoisyDataset ds{small_features(), {1, -1, 1}};
    CHECK_NOTHROW(validate_dataset(ds));
}

TEST_CASE("validate_dataset rejects length mismatch") {
    NoisyDataset ds{small_features(), {1, -1}};
    CHECK_THROWS_AS(validate_dataset(ds), LengthMismatchError);
}

TEST_CASE("validate_dataset rejects non-finite features") {
    auto fm = small_features();
    fm.values[2] = std::numeric_limits<double>::quiet_NaN();
    NoisyDataset ds{fm, {1, -1, 1}};
    CHECK_THROWS_AS(validate_dataset(ds), NonFiniteFeatureError);
}

TEST_CASE("audited dataset with a single clean class is rejected") {
    AuditedDataset ds{small_features(), {1, 1, 1}, {1, -1, 1}};
    CHECK_THROWS_AS(validate_dataset(ds), MissingClassError);
}

TEST_CASE("kfold_split equal division") {
    const auto folds = kfold_split(10, 5, Rng(1, 2));
    REQUIRE(folds.size() == 5);
    for (const auto& f : folds) CHECK(f.size() == 2);
}

TEST_CASE("kfold_split remainder rule") {
    const auto folds = kfold_split(11, 5, Rng(1, 2));
    std::multiset<std::size_t> sizes;
    for (const auto& f : folds) sizes.insert(f.size());
    CHECK(sizes == std::multiset<std::size_t>{3, 2, 2, 2, 2});
}

TEST_CASE("kfold_split is deterministic and partitions the range") {
    for (std::size_t n : {std::size_t{7}, std::size_t{23}, std::size_t{100}}) {
        for (std::size_t k : {std::size_t{2}, std::size_t{5}}) {
            const auto a = kfold_split(n, k, Rng(42, 7));
            const auto b = kfold_split(n, k, Rng(42, 7));
            CHECK(a == b);
            std::set<std::size_t> all;
            std::size_t total = 0;
            for (const auto& f : a) {
                total += f.size();
                all.insert(f.begin(), f.end());
            }
            CHECK(total == n);
            CHECK(all.size() == n);  // disjoint cover
            CHECK(*all.rbegin() == n - 1);
        }
    }
}

TEST_CASE("kfold_split rejects n < k") {
    CHECK_THROWS_AS(kfold_split(3, 5, Rng(0, 0)), TooFewSamplesError);
}

TEST_CASE("rng streams replay and separate") {
    Rng a(123, 45), b(123, 45), c(123, 46);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        all_equal &= x == b.next_u64();
        any_diff |= x != c.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.u01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("counter-keyed uniforms are reproducible") {
    CHECK(u01_at(9, 3, 14) == u01_at(9, 3, 14));
    CHECK(u01_at(9, 3, 14) != u01_at(9, 4, 14));
}

TEST_CASE("csv round trip") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "bofuse_csv_test";
    fs::create_directories(dir);

    Rng rng(5, 0);
    FeatureMatrix fm(17, 3);
    for (auto& v : fm.values) v = rng.normal();
    std::vector<Label> noisy(17), clean(17);
    for (std::size_t i = 0; i < 17; ++i) {
        noisy[i] = rng.bernoulli(0.5) ? 1 : -1;
        clean[i] = rng.bernoulli(0.5) ? 1 : -1;
    }
    clean[0] = 1;
    clean[1] = -1;

    const NoisyDataset nd{fm, noisy};
    const auto npath = (dir / "n.csv").string();
    write_csv(nd, npath);
    const NoisyDataset nd2 = read_noisy_csv(npath);
    CHECK(nd2.features.values == nd.features.values);
    CHECK(nd2.noisy_labels == nd.noisy_labels);

    const AuditedDataset ad{fm, clean, noisy};
    const auto apath = (dir / "a.csv").string();
    write_csv(ad, apath);
    const AuditedDataset ad2 = read_audited_csv(apath);
    CHECK(ad2.features.values == ad.features.values);
    CHECK(ad2.clean_labels == ad.clean_labels);
    CHECK(ad2.noisy_labels == ad.noisy_labels);
}
