#ifndef FEDPNN_SYNTHMETRICS_HPP
#define FEDPNN_SYNTHMETRICS_HPP

#include "fedpnn/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fedpnn {

/// 1 minus the exact two-sample Kolmogorov-Smirnov statistic, computed from
/// empirical CDFs over the merged support (no binning). 1 means the columns
/// have identical marginal distributions.
double ks_complement(const Vector& real_col, const Vector& synth_col);

/// Mean ks_complement over feature columns matched by name; labels excluded.
double mean_ks_complement(const LabeledDataset& real, const LabeledDataset& synth);

/// Sample Pearson correlation; requires equal lengths >= 2 and both inputs
/// non-constant. Result clamped into [-1, 1].
double pearson(const Vector& a, const Vector& b);

/// Mean over all unordered feature pairs of 1 - |S_ab - R_ab| / 2, where S
/// and R are the pair's correlations on the synthetic and real datasets. A
/// column constant in both datasets contributes correlation 0 on both sides;
/// a column constant in exactly one makes its pairs undefined, so they are
/// skipped.
double cs_test(const LabeledDataset& real, const LabeledDataset& synth);

/// (sensitivity + specificity) / 2 from confusion counts, evaluated as a
/// single fraction so hand-derived decimal values reproduce exactly.
double auc_from_counts(std::int64_t tp, std::int64_t fn, std::int64_t tn, std::int64_t fp);

struct QualityReport {
    struct PairScore {
        std::string col_a;
        std::string col_b;
        double score = 0.0;
    };

    std::vector<std::pair<std::string, double>> column_ks;
    double mean_ks = 0.0;
    std::vector<PairScore> pair_scores;
    std::vector<std::pair<std::string, std::string>> skipped_pairs;
    double mean_cs = 0.0;
};

/// Full per-column / per-pair breakdown backing the eval-synth report.
QualityReport evaluate_quality(const LabeledDataset& real, const LabeledDataset& synth);

std::string format_quality_report(const QualityReport& report,
                                  const std::string& real_name,
                                  const std::string& synth_name);

} // namespace fedpnn

#endif
