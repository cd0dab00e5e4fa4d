#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fedpnn/rng.hpp"
#include "fedpnn/synthmetrics.hpp"

#include <cmath>

using namespace fedpnn;

namespace {

Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<Index>(values.size()));
    Index i = 0;
    for (double x : values) {
        v[i++] = x;
    }
    return v;
}

LabeledDataset dataset_from_columns(std::initializer_list<Vector> columns) {
    LabeledDataset ds;
    const Index d = static_cast<Index>(columns.size());
    const Index n = columns.begin()->size();
    ds.features.resize(n, d);
    Index j = 0;
    for (const auto& col : columns) {
        ds.features.col(j) = col;
        ds.feature_names.push_back("c" + std::to_string(j));
        ++j;
    }
    ds.labels = IntVector::Zero(n);
    ds.labels[0] = 1;
    return ds;
}

} // namespace

TEST_CASE("ks complement: identities and hand-computed gaps") {
    const Vector a = vec({1.0, 2.0, 3.0, 4.0});
    CHECK(ks_complement(a, a) == 1.0);
    CHECK(ks_complement(vec({0.0, 0.0, 0.0}), vec({1.0, 1.0, 1.0})) == 0.0);
    CHECK(ks_complement(a, vec({1.0, 2.0, 3.0, 5.0})) == 0.75);
    CHECK_THROWS_AS(ks_complement(a, Vector{}), ValidationError);
}

TEST_CASE("ks complement: symmetric, order-free and monotone-transform invariant") {
    Rng rng(404);
    for (int rep = 0; rep < 50; ++rep) {
        const Index na = 1 + static_cast<Index>(rng.below(30));
        const Index nb = 1 + static_cast<Index>(rng.below(30));
        Vector a(na), b(nb);
        for (Index i = 0; i < na; ++i) {
            a[i] = rng.unit_real() * 4.0 - 2.0;
        }
        for (Index i = 0; i < nb; ++i) {
            b[i] = rng.unit_real() * 4.0 - 2.0;
        }
        const double score = ks_complement(a, b);
        CHECK(score >= 0.0);
        CHECK(score <= 1.0);
        CHECK(ks_complement(b, a) == score);

        Vector shuffled = a;
        for (Index i = na - 1; i > 0; --i) {
            std::swap(shuffled[i], shuffled[static_cast<Index>(rng.below(
                                       static_cast<std::uint64_t>(i + 1)))]);
        }
        CHECK(ks_complement(shuffled, b) == score);

        const Vector ta = a.array().exp();
        const Vector tb = b.array().exp();
        CHECK(ks_complement(ta, tb) == score);
    }
}

TEST_CASE("mean ks complement matches columns by name and skips the label") {
    const LabeledDataset real =
        dataset_from_columns({vec({1.0, 2.0, 3.0, 4.0}), vec({5.0, 6.0, 7.0, 8.0})});
    CHECK(mean_ks_complement(real, real) == 1.0);

    // column 0 identical (scores 1.0), column 1 has a single shifted value
    // with a CDF gap of 0.25 (scores 0.75)
    LabeledDataset synth = real;
    synth.features.col(1) = vec({5.0, 6.0, 7.0, 9.0});
    CHECK(mean_ks_complement(real, synth) == doctest::Approx((1.0 + 0.75) / 2.0));

    LabeledDataset renamed = real;
    renamed.feature_names[1] = "other";
    CHECK_THROWS_WITH_AS(mean_ks_complement(real, renamed), doctest::Contains("other"), DataError);
}

TEST_CASE("pearson: exact endpoints and a hand-computed value") {
    const Vector a = vec({1.0, 2.0, 3.0});
    CHECK(pearson(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson(a, vec({-1.0, -2.0, -3.0})) == doctest::Approx(-1.0).epsilon(1e-12));
    // r = 9 / (2 sqrt(21))
    CHECK(pearson(a, vec({1.0, 2.0, 4.0})) ==
          doctest::Approx(9.0 / (2.0 * std::sqrt(21.0))).epsilon(1e-12));
    CHECK_THROWS_AS(pearson(a, vec({1.0, 2.0})), ValidationError);
    CHECK_THROWS_AS(pearson(vec({1.0}), vec({1.0})), ValidationError);
    CHECK_THROWS_AS(pearson(vec({2.0, 2.0, 2.0}), a), ValidationError);
}

TEST_CASE("cs test: identity, opposite correlations and the formula") {
    const LabeledDataset real =
        dataset_from_columns({vec({0.0, 1.0, 2.0}), vec({0.0, 1.0, 2.0})});
    CHECK(cs_test(real, real) == 1.0);

    // real correlation +1, synthetic correlation -1: pair score 0
    const LabeledDataset anti =
        dataset_from_columns({vec({0.0, 1.0, 2.0}), vec({2.0, 1.0, 0.0})});
    CHECK(cs_test(real, anti) == 0.0);

    // generic instance must equal the direct formula arithmetic
    Rng rng(17);
    Vector a(20), b(20), c(20), d(20);
    for (Index i = 0; i < 20; ++i) {
        a[i] = rng.unit_real();
        b[i] = rng.unit_real() + 0.3 * a[i];
        c[i] = rng.unit_real();
        d[i] = rng.unit_real() - 0.5 * c[i];
    }
    const LabeledDataset r2 = dataset_from_columns({a, b});
    const LabeledDataset s2 = dataset_from_columns({c, d});
    const double want = 1.0 - std::abs(pearson(c, d) - pearson(a, b)) / 2.0;
    CHECK(cs_test(r2, s2) == want);

    CHECK_THROWS_AS(cs_test(dataset_from_columns({a}), dataset_from_columns({c})),
                    ValidationError);
}

TEST_CASE("cs test: constant-column decisions") {
    const Vector flat = vec({5.0, 5.0, 5.0, 5.0});
    const Vector rise = vec({0.0, 1.0, 2.0, 3.0});
    const Vector fall = vec({3.0, 2.0, 1.0, 0.0});
    const Vector bumpy = vec({1.0, 3.0, 2.0, 4.0});

    // constant in both datasets: the pair counts with correlation 0 vs 0
    const LabeledDataset real = dataset_from_columns({flat, rise});
    const LabeledDataset synth = dataset_from_columns({flat, fall});
    CHECK(cs_test(real, synth) == 1.0);

    // constant in exactly one dataset: every pair involving it is skipped
    // and reported; the rest still average normally
    const LabeledDataset real3 = dataset_from_columns({flat, rise, bumpy});
    const LabeledDataset synth3 = dataset_from_columns({rise, fall, bumpy});
    const auto report = evaluate_quality(real3, synth3);
    CHECK(report.skipped_pairs.size() == 2);
    CHECK(report.pair_scores.size() == 1);
    const double expected = 1.0 - std::abs(pearson(fall, bumpy) - pearson(rise, bumpy)) / 2.0;
    CHECK(cs_test(real3, synth3) == expected);

    // nothing left to average: an error, not an invented score
    const LabeledDataset broken = dataset_from_columns({rise, fall});
    CHECK_THROWS_AS(cs_test(real, broken), DataError);
    CHECK_THROWS_AS(evaluate_quality(real, broken), DataError);
}

TEST_CASE("auc from counts: identities, extremes and the exact hand case") {
    CHECK(auc_from_counts(10, 0, 10, 0) == 1.0);
    CHECK(auc_from_counts(0, 10, 10, 0) == 0.5);
    CHECK(auc_from_counts(8, 2, 9, 1) == 0.85);
    CHECK(auc_from_counts(1, 0, 0, 1) == 0.5);
    CHECK_THROWS_AS(auc_from_counts(0, 0, 5, 5), ValidationError);
    CHECK_THROWS_AS(auc_from_counts(5, 5, 0, 0), ValidationError);
    CHECK_THROWS_AS(auc_from_counts(-1, 2, 3, 4), ValidationError);
}

TEST_CASE("auc from counts stays within [0,1] on random counts") {
    Rng rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const auto tp = static_cast<std::int64_t>(rng.below(50));
        const auto fn = static_cast<std::int64_t>(rng.below(50));
        const auto tn = static_cast<std::int64_t>(rng.below(50));
        const auto fp = static_cast<std::int64_t>(rng.below(50));
        if (tp + fn == 0 || tn + fp == 0) {
            continue;
        }
        const double auc = auc_from_counts(tp, fn, tn, fp);
        CHECK(auc >= 0.0);
        CHECK(auc <= 1.0);
    }
}

TEST_CASE("row order does not affect the quality scores") {
    Rng rng(2718);
    LabeledDataset real;
    real.features.resize(30, 3);
    for (Index i = 0; i < 30; ++i) {
        for (Index j = 0; j < 3; ++j) {
            real.features(i, j) = rng.unit_real() * 7.0;
        }
    }
    real.labels = IntVector::Zero(30);
    real.labels[0] = 1;
    real.feature_names = {"a", "b", "c"};

    LabeledDataset permuted = real;
    std::vector<Index> order(30);
    for (Index i = 0; i < 30; ++i) {
        order[static_cast<std::size_t>(i)] = i;
    }
    rng.shuffle(order);
    for (Index i = 0; i < 30; ++i) {
        permuted.features.row(i) = real.features.row(order[static_cast<std::size_t>(i)]);
    }
    CHECK(mean_ks_complement(real, permuted) == 1.0);
}

TEST_CASE("quality report carries per-column and mean scores") {
    const LabeledDataset real =
        dataset_from_columns({vec({1.0, 2.0, 3.0, 4.0}), vec({2.0, 4.0, 6.0, 8.0})});
    const auto report = evaluate_quality(real, real);
    REQUIRE(report.column_ks.size() == 2);
    CHECK(report.column_ks[0].second == 1.0);
    CHECK(report.mean_ks == 1.0);
    CHECK(report.mean_cs == 1.0);
    const std::string text = format_quality_report(report, "real.csv", "synth.csv");
    CHECK(text.find("mean KSComplement: 1.000000") != std::string::npos);
    CHECK(text.find("mean CStest: 1.000000") != std::string::npos);
    CHECK(text.find("c0") != std::string::npos);
}
