#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fedpnn/dataset.hpp"
#include "fedpnn/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

using namespace fedpnn;

namespace {

// Scratch CSV helper; files land in the build tree's temp dir.
struct TempCsv {
    std::filesystem::path path;

    explicit TempCsv(const std::string& contents) {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("fedpnn_test_" + std::to_string(counter++) + ".csv");
        std::ofstream out(path);
        out << contents;
    }
    ~TempCsv() { std::error_code ec; std::filesystem::remove(path, ec); }
};

LabeledDataset two_class_dataset(Index n0, Index n1, std::uint64_t seed = 7) {
    Rng rng(seed);
    LabeledDataset ds;
    ds.features.resize(n0 + n1, 3);
    ds.labels.resize(n0 + n1);
    ds.feature_names = {"a", "b", "c"};
    for (Index i = 0; i < n0 + n1; ++i) {
        ds.labels[i] = i < n0 ? 0 : 1;
        for (Index j = 0; j < 3; ++j) {
            ds.features(i, j) = rng.unit_real() * 10.0;
        }
    }
    return ds;
}

std::vector<Index> class_counts(const LabeledDataset& ds) {
    std::vector<Index> counts(2, 0);
    for (Index i = 0; i < ds.rows(); ++i) {
        ++counts[static_cast<std::size_t>(ds.labels[i])];
    }
    return counts;
}

} // namespace

TEST_CASE("csv loading: happy path and label handling") {
    TempCsv file("x,y,label\n1.5,2.0,0\n3.25,4.5,1\n5.0,6.75,0\n");
    const LabeledDataset ds = load_csv(file.path);
    CHECK(ds.rows() == 3);
    CHECK(ds.dims() == 2);
    CHECK(ds.labels[0] == 0);
    CHECK(ds.labels[1] == 1);
    CHECK(ds.labels[2] == 0);
    CHECK(ds.features(1, 0) == 3.25);
    CHECK(ds.feature_names == std::vector<std::string>{"x", "y"});
}

TEST_CASE("csv loading: label column override") {
    TempCsv file("label,x,y\n1,1.0,2.0\n0,3.0,4.0\n");
    const LabeledDataset ds = load_csv(file.path, 0);
    CHECK(ds.rows() == 2);
    CHECK(ds.labels[0] == 1);
    CHECK(ds.feature_names == std::vector<std::string>{"x", "y"});
    CHECK_THROWS_AS(load_csv(file.path, 3), ValidationError);
}

TEST_CASE("csv loading: each failure mode names its location") {
    CHECK_THROWS_WITH_AS(load_csv("does_not_exist.csv"), doctest::Contains("cannot open"),
                         DataError);
    {
        TempCsv empty("");
        CHECK_THROWS_WITH_AS(load_csv(empty.path), doctest::Contains("empty file"), DataError);
    }
    {
        TempCsv header_only("x,label\n");
        CHECK_THROWS_WITH_AS(load_csv(header_only.path), doctest::Contains("no data rows"),
                             DataError);
    }
    {
        TempCsv bad_label("x,label\n1.0,2\n");
        CHECK_THROWS_WITH_AS(load_csv(bad_label.path),
                             doctest::Contains("label outside {0,1} at row 1"), DataError);
    }
    {
        TempCsv bad_cell("x,label\n1.0,0\nfoo,1\n");
        CHECK_THROWS_WITH_AS(load_csv(bad_cell.path), doctest::Contains("row 2"), DataError);
        CHECK_THROWS_WITH_AS(load_csv(bad_cell.path), doctest::Contains("column 'x'"), DataError);
    }
    {
        TempCsv ragged("x,y,label\n1.0,2.0,0\n1.0,1\n");
        CHECK_THROWS_WITH_AS(load_csv(ragged.path), doctest::Contains("expected 3 columns"),
                             DataError);
    }
}

TEST_CASE("bundled breast cancer table has the expected shape") {
    const LabeledDataset ds = load_csv(std::string(FEDPNN_DATA_DIR) + "/breast_cancer.csv");
    CHECK(ds.rows() == 699);
    CHECK(ds.dims() == 9);
    const auto counts = class_counts(ds);
    CHECK(counts[0] == 458);
    CHECK(counts[1] == 241);
}

TEST_CASE("csv round trip preserves values and labels") {
    const LabeledDataset ds = two_class_dataset(5, 4);
    TempCsv file("");
    write_csv(ds, file.path);
    const LabeledDataset back = load_csv(file.path);
    CHECK(back.features == ds.features);
    CHECK(back.labels == ds.labels);
    CHECK(back.feature_names == ds.feature_names);
}

TEST_CASE("normalization: fit captures column extrema") {
    LabeledDataset ds;
    ds.features.resize(3, 2);
    ds.features << 0.0, 1.0, 5.0, 2.0, 10.0, 3.0;
    ds.labels.resize(3);
    ds.labels << 0, 1, 0;
    ds.feature_names = {"a", "b"};
    const auto params = normalize_fit(ds);
    CHECK(params.min[0] == 0.0);
    CHECK(params.max[0] == 10.0);
    CHECK(params.min[1] == 1.0);
    CHECK(params.max[1] == 3.0);

    LabeledDataset constant;
    constant.features.resize(3, 1);
    constant.features << 3.0, 3.0, 3.0;
    constant.labels.resize(3);
    constant.labels << 0, 1, 0;
    constant.feature_names = {"c"};
    const auto cp = normalize_fit(constant);
    CHECK(cp.min[0] == 3.0);
    CHECK(cp.max[0] == 3.0);
    CHECK(normalize_apply(cp, constant).features(1, 0) == 0.0);
}

TEST_CASE("normalization: apply maps, clamps and rejects bad dims") {
    NormalizationParams params;
    params.min.resize(1);
    params.max.resize(1);
    params.min << 0.0;
    params.max << 10.0;

    LabeledDataset ds;
    ds.features.resize(3, 1);
    ds.features << 5.0, 12.0, -3.0;
    ds.labels.resize(3);
    ds.labels << 0, 1, 0;
    ds.feature_names = {"a"};
    const LabeledDataset out = normalize_apply(params, ds);
    CHECK(out.features(0, 0) == 0.5);
    CHECK(out.features(1, 0) == 1.0);
    CHECK(out.features(2, 0) == 0.0);

    LabeledDataset wide = two_class_dataset(2, 2);
    CHECK_THROWS_AS(normalize_apply(params, wide), ValidationError);
}

TEST_CASE("normalization: training data lands in [0,1] and identity params are idempotent") {
    Rng rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        const LabeledDataset ds = two_class_dataset(
            3 + static_cast<Index>(rng.below(20)), 3 + static_cast<Index>(rng.below(20)),
            rng.next());
        const auto params = normalize_fit(ds);
        const LabeledDataset norm = normalize_apply(params, ds);
        CHECK(norm.features.minCoeff() >= 0.0);
        CHECK(norm.features.maxCoeff() <= 1.0);

        NormalizationParams unit;
        unit.min = RowVector::Zero(ds.dims());
        unit.max = RowVector::Ones(ds.dims());
        const LabeledDataset again = normalize_apply(unit, norm);
        CHECK(again.features == norm.features);
    }
}

TEST_CASE("partition: sizes follow round(n*b/100) with near-equal clients") {
    const LabeledDataset ds = two_class_dataset(60, 40);
    const PartitionPlan plan = partition(ds, 2, 10.0, 42);
    CHECK(plan.server_rows.size() == 10);
    CHECK(plan.client_rows[0].size() == 45);
    CHECK(plan.client_rows[1].size() == 45);

    const PartitionPlan single = partition(ds, 1, 10.0, 42);
    CHECK(single.client_rows[0].size() == 90);
}

TEST_CASE("partition: rerunning the same seed reproduces the plan") {
    const LabeledDataset ds = two_class_dataset(33, 21);
    const PartitionPlan a = partition(ds, 3, 12.5, 99);
    const PartitionPlan b = partition(ds, 3, 12.5, 99);
    CHECK(a.server_rows == b.server_rows);
    CHECK(a.client_rows == b.client_rows);
    CHECK(format_partition_manifest(a) == format_partition_manifest(b));

    const PartitionPlan c = partition(ds, 3, 12.5, 100);
    CHECK(format_partition_manifest(a) != format_partition_manifest(c));
}

TEST_CASE("partition: shards are disjoint and exhaustive with a stratified reserve") {
    Rng rng(31337);
    for (int rep = 0; rep < 30; ++rep) {
        const Index n0 = 8 + static_cast<Index>(rng.below(40));
        const Index n1 = 8 + static_cast<Index>(rng.below(40));
        const int clients = 1 + static_cast<int>(rng.below(4));
        const double b = 5.0 + 20.0 * rng.unit_real();
        const auto mode = rng.below(2) == 0 ? Sharding::kSimpleRandom : Sharding::kStratified;
        const LabeledDataset ds = two_class_dataset(n0, n1, rng.next());
        const PartitionPlan plan = partition(ds, clients, b, rng.next(), mode);

        std::set<Index> seen(plan.server_rows.begin(), plan.server_rows.end());
        std::size_t total = plan.server_rows.size();
        for (const auto& shard : plan.client_rows) {
            seen.insert(shard.begin(), shard.end());
            total += shard.size();
        }
        CHECK(total == static_cast<std::size_t>(ds.rows()));
        CHECK(seen.size() == total);

        // stratified server reserve: per-class share within one row
        std::vector<Index> server_counts(2, 0);
        for (Index row : plan.server_rows) {
            ++server_counts[static_cast<std::size_t>(ds.labels[row])];
        }
        const double want_total = std::llround(static_cast<double>(ds.rows()) * b / 100.0);
        CHECK(static_cast<double>(plan.server_rows.size()) == want_total);
        for (std::size_t c = 0; c < 2; ++c) {
            const double share = want_total * static_cast<double>(c == 0 ? n0 : n1) /
                                 static_cast<double>(ds.rows());
            CHECK(std::abs(static_cast<double>(server_counts[c]) - share) <= 1.0);
        }

        if (mode == Sharding::kSimpleRandom) {
            std::size_t smallest = plan.client_rows[0].size();
            std::size_t largest = plan.client_rows[0].size();
            for (const auto& shard : plan.client_rows) {
                smallest = std::min(smallest, shard.size());
                largest = std::max(largest, shard.size());
            }
            CHECK(largest - smallest <= 1);
        } else {
            for (const auto& shard : plan.client_rows) {
                std::vector<double> got(2, 0);
                for (Index row : shard) {
                    ++got[static_cast<std::size_t>(ds.labels[row])];
                }
                for (std::size_t c = 0; c < 2; ++c) {
                    const Index leftover = (c == 0 ? n0 : n1) - server_counts[c];
                    const double share = static_cast<double>(leftover) / clients;
                    CHECK(std::abs(got[c] - share) <= 1.0);
                }
            }
        }
    }
}

TEST_CASE("partition: validation errors") {
    const LabeledDataset ds = two_class_dataset(10, 2);
    CHECK_THROWS_AS(partition(ds, 0, 10.0, 1), ValidationError);
    CHECK_THROWS_AS(partition(ds, 2, 0.0, 1), ValidationError);
    CHECK_THROWS_AS(partition(ds, 2, 100.0, 1), ValidationError);
    // class 1 has 2 rows; needs clients + 1 = 3
    CHECK_THROWS_AS(partition(ds, 2, 10.0, 1), ValidationError);
}

TEST_CASE("stratified split: exact small case and the 699-row case") {
    const LabeledDataset ds = two_class_dataset(5, 5);
    const auto [train, test] = stratified_split(ds, 0.8, 3);
    CHECK(train.rows() == 8);
    CHECK(test.rows() == 2);
    const auto train_counts = class_counts(train);
    CHECK(train_counts[0] == 4);
    CHECK(train_counts[1] == 4);

    const LabeledDataset big = two_class_dataset(458, 241);
    const auto [btrain, btest] = stratified_split(big, 0.8, 3);
    CHECK(std::abs(btrain.rows() - 559) <= 1);
    CHECK(std::abs(btest.rows() - 140) <= 1);
    CHECK(btrain.rows() + btest.rows() == 699);
}

TEST_CASE("stratified split: determinism, union and per-class tolerance") {
    Rng rng(808);
    for (int rep = 0; rep < 30; ++rep) {
        const Index n0 = 2 + static_cast<Index>(rng.below(40));
        const Index n1 = 2 + static_cast<Index>(rng.below(40));
        const double frac = 0.15 + 0.7 * rng.unit_real();
        const std::uint64_t seed = rng.next();
        const LabeledDataset ds = two_class_dataset(n0, n1, rng.next());

        const auto [train, test] = stratified_split(ds, frac, seed);
        const auto [train2, test2] = stratified_split(ds, frac, seed);
        CHECK(train.features == train2.features);
        CHECK(test.labels == test2.labels);

        CHECK(train.rows() + test.rows() == ds.rows());
        const auto tc = class_counts(train);
        for (std::size_t c = 0; c < 2; ++c) {
            const double share = frac * static_cast<double>(c == 0 ? n0 : n1);
            CHECK(std::abs(static_cast<double>(tc[c]) - share) <= 1.0);
        }
    }
}

TEST_CASE("stratified split: validation errors") {
    const LabeledDataset ds = two_class_dataset(4, 4);
    CHECK_THROWS_AS(stratified_split(ds, 0.0, 1), ValidationError);
    CHECK_THROWS_AS(stratified_split(ds, 1.0, 1), ValidationError);
    const LabeledDataset tiny = two_class_dataset(4, 1);
    CHECK_THROWS_AS(stratified_split(tiny, 0.8, 1), ValidationError);
}

TEST_CASE("t-statistic selection: identity, ranking and the zero-variance rule") {
    LabeledDataset ds;
    ds.features.resize(6, 3);
    // column 0 separates the classes, column 1 is noise, column 2 is constant
    ds.features << 1.0, 5.0, 7.0,
                   1.1, 4.0, 7.0,
                   0.9, 6.0, 7.0,
                   9.0, 5.5, 7.0,
                   9.1, 4.5, 7.0,
                   8.9, 5.0, 7.0;
    ds.labels.resize(6);
    ds.labels << 0, 0, 0, 1, 1, 1;
    ds.feature_names = {"sep", "noise", "flat"};

    const LabeledDataset all = select_features_tstat(ds, 3);
    CHECK(all.feature_names == std::vector<std::string>{"sep", "noise", "flat"});
    CHECK(all.features == ds.features);

    const LabeledDataset two = select_features_tstat(ds, 2);
    CHECK(two.feature_names == std::vector<std::string>{"sep", "noise"});

    const LabeledDataset one = select_features_tstat(ds, 1);
    CHECK(one.feature_names == std::vector<std::string>{"sep"});

    CHECK_THROWS_AS(select_features_tstat(ds, 0), ValidationError);
    CHECK_THROWS_AS(select_features_tstat(ds, 4), ValidationError);

    LabeledDataset single = ds;
    single.labels.setZero();
    CHECK_THROWS_AS(select_features_tstat(single, 2), ValidationError);
}

TEST_CASE("t-statistic selection: wide matrix keeps exactly k columns") {
    Rng rng(606);
    LabeledDataset ds;
    const Index d = 1000;
    ds.features.resize(20, d);
    ds.labels.resize(20);
    for (Index i = 0; i < 20; ++i) {
        ds.labels[i] = i < 10 ? 0 : 1;
        for (Index j = 0; j < d; ++j) {
            ds.features(i, j) = rng.unit_real();
        }
    }
    for (Index j = 0; j < d; ++j) {
        ds.feature_names.push_back("f" + std::to_string(j));
    }
    const LabeledDataset top = select_features_tstat(ds, 500);
    CHECK(top.dims() == 500);
    CHECK(top.rows() == 20);
    CHECK(std::is_sorted(top.feature_names.begin(), top.feature_names.end(),
                         [](const std::string& a, const std::string& b) {
                             return std::stoi(a.substr(1)) < std::stoi(b.substr(1));
                         }));
}

TEST_CASE("manifest lists seed, b_percent and one line per shard") {
    const LabeledDataset ds = two_class_dataset(30, 20);
    const PartitionPlan plan = partition(ds, 2, 10.0, 7);
    const std::string manifest = format_partition_manifest(plan);
    CHECK(manifest.find("seed: 7\n") != std::string::npos);
    CHECK(manifest.find("b_percent: 10\n") != std::string::npos);
    CHECK(manifest.find("server:") != std::string::npos);
    CHECK(manifest.find("client_1:") != std::string::npos);
    CHECK(manifest.find("client_2:") != std::string::npos);
    CHECK(std::count(manifest.begin(), manifest.end(), '\n') == 5);
}
