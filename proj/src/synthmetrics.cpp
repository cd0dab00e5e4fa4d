#include "fedpnn/synthmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <iomanip>

namespace fedpnn {

namespace {

bool is_constant(const Eigen::Ref<const Vector>& v) {
    return (v.array() == v[0]).all();
}

void require_matching_features(const LabeledDataset& real, const LabeledDataset& synth) {
    if (real.dims() != synth.dims()) {
        throw DataError("datasets disagree on feature count: " + std::to_string(real.dims()) +
                        " vs " + std::to_string(synth.dims()));
    }
    for (Index j = 0; j < real.dims(); ++j) {
        const auto& a = real.feature_names[static_cast<std::size_t>(j)];
        const auto& b = synth.feature_names[static_cast<std::size_t>(j)];
        if (a != b) {
            throw DataError("feature column mismatch at index " + std::to_string(j) + ": '" + a +
                            "' vs '" + b + "'");
        }
    }
}

} // namespace

double ks_complement(const Vector& real_col, const Vector& synth_col) {
    if (real_col.size() == 0 || synth_col.size() == 0) {
        throw ValidationError("ks_complement: empty column");
    }
    std::vector<double> a(real_col.data(), real_col.data() + real_col.size());
    std::vector<double> b(synth_col.data(), synth_col.data() + synth_col.size());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double sup = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) {
            ++i;
        }
        while (j < b.size() && b[j] <= x) {
            ++j;
        }
        sup = std::max(sup, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return 1.0 - sup;
}

double mean_ks_complement(const LabeledDataset& real, const LabeledDataset& synth) {
    check_dataset(real);
    check_dataset(synth);
    require_matching_features(real, synth);
    double sum = 0.0;
    for (Index j = 0; j < real.dims(); ++j) {
        sum += ks_complement(real.features.col(j), synth.features.col(j));
    }
    return sum / static_cast<double>(real.dims());
}

double pearson(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw ValidationError("pearson: length mismatch");
    }
    if (a.size() < 2) {
        throw ValidationError("pearson: need at least 2 samples");
    }
    const Vector ca = a.array() - a.mean();
    const Vector cb = b.array() - b.mean();
    const double ssa = ca.squaredNorm();
    const double ssb = cb.squaredNorm();
    if (ssa == 0.0 || ssb == 0.0) {
        throw ValidationError("pearson: undefined for a constant input");
    }
    const double r = ca.dot(cb) / std::sqrt(ssa * ssb);
    return std::clamp(r, -1.0, 1.0);
}

namespace {

struct PairOutcome {
    double score = 0.0;
    bool skipped = false;
};

PairOutcome pair_similarity(const LabeledDataset& real, const LabeledDataset& synth,
                            Index col_a, Index col_b) {
    const bool const_real_a = is_constant(real.features.col(col_a));
    const bool const_real_b = is_constant(real.features.col(col_b));
    const bool const_synth_a = is_constant(synth.features.col(col_a));
    const bool const_synth_b = is_constant(synth.features.col(col_b));
    if (const_real_a != const_synth_a || const_real_b != const_synth_b) {
        return {0.0, true}; // correlation defined on one side only
    }
    double r_real = 0.0;
    double r_synth = 0.0;
    if (!const_real_a && !const_real_b) {
        r_real = pearson(real.features.col(col_a), real.features.col(col_b));
        r_synth = pearson(synth.features.col(col_a), synth.features.col(col_b));
    }
    return {1.0 - std::abs(r_synth - r_real) / 2.0, false};
}

} // namespace

double cs_test(const LabeledDataset& real, const LabeledDataset& synth) {
    check_dataset(real);
    check_dataset(synth);
    require_matching_features(real, synth);
    if (real.dims() < 2) {
        throw ValidationError("cs_test needs at least 2 feature columns");
    }
    double sum = 0.0;
    std::int64_t pairs = 0;
    for (Index a = 0; a < real.dims(); ++a) {
        for (Index b = a + 1; b < real.dims(); ++b) {
            const auto outcome = pair_similarity(real, synth, a, b);
            if (!outcome.skipped) {
                sum += outcome.score;
                ++pairs;
            }
        }
    }
    if (pairs == 0) {
        throw DataError("every column pair was skipped (constant in exactly one dataset)");
    }
    return sum / static_cast<double>(pairs);
}

double auc_from_counts(std::int64_t tp, std::int64_t fn, std::int64_t tn, std::int64_t fp) {
    if (tp < 0 || fn < 0 || tn < 0 || fp < 0) {
        throw ValidationError("confusion counts must be non-negative");
    }
    if (tp + fn < 1) {
        throw ValidationError("sensitivity undefined: no positive samples (tp + fn = 0)");
    }
    if (tn + fp < 1) {
        throw ValidationError("specificity undefined: no negative samples (tn + fp = 0)");
    }
    // single fraction: (sens + spec) / 2 with one rounding step
    const double num = static_cast<double>(tp) * static_cast<double>(tn + fp) +
                       static_cast<double>(tn) * static_cast<double>(tp + fn);
    const double den = 2.0 * static_cast<double>(tp + fn) * static_cast<double>(tn + fp);
    return num / den;
}

QualityReport evaluate_quality(const LabeledDataset& real, const LabeledDataset& synth) {
    check_dataset(real);
    check_dataset(synth);
    require_matching_features(real, synth);

    QualityReport report;
    double ks_sum = 0.0;
    for (Index j = 0; j < real.dims(); ++j) {
        const double score = ks_complement(real.features.col(j), synth.features.col(j));
        report.column_ks.emplace_back(real.feature_names[static_cast<std::size_t>(j)], score);
        ks_sum += score;
    }
    report.mean_ks = ks_sum / static_cast<double>(real.dims());

    if (real.dims() >= 2) {
        double cs_sum = 0.0;
        std::int64_t pairs = 0;
        for (Index a = 0; a < real.dims(); ++a) {
            for (Index b = a + 1; b < real.dims(); ++b) {
                const auto& name_a = real.feature_names[static_cast<std::size_t>(a)];
                const auto& name_b = real.feature_names[static_cast<std::size_t>(b)];
                const auto outcome = pair_similarity(real, synth, a, b);
                if (outcome.skipped) {
                    report.skipped_pairs.emplace_back(name_a, name_b);
                } else {
                    report.pair_scores.push_back({name_a, name_b, outcome.score});
                    cs_sum += outcome.score;
                    ++pairs;
                }
            }
        }
        if (pairs == 0) {
            throw DataError("every column pair was skipped (constant in exactly one dataset)");
        }
        report.mean_cs = cs_sum / static_cast<double>(pairs);
    }
    return report;
}

std::string format_quality_report(const QualityReport& report, const std::string& real_name,
                                  const std::string& synth_name) {
    std::ostringstream out;
    out << "Synthetic data quality report\n";
    out << "=============================\n";
    out << "real:  " << real_name << "\n";
    out << "synth: " << synth_name << "\n\n";
    out << "KSComplement per column\n";
    for (const auto& [name, score] : report.column_ks) {
        out << "  " << std::left << std::setw(44) << name << std::fixed << std::setprecision(6)
            << score << "\n";
    }
    out << "mean KSComplement: " << std::fixed << std::setprecision(6) << report.mean_ks << "\n\n";
    out << "Correlation similarity per pair\n";
    for (const auto& pair : report.pair_scores) {
        out << "  " << std::left << std::setw(44) << (pair.col_a + " / " + pair.col_b)
            << std::fixed << std::setprecision(6) << pair.score << "\n";
    }
    for (const auto& [a, b] : report.skipped_pairs) {
        out << "  " << std::left << std::setw(44) << (a + " / " + b)
            << "skipped (constant in exactly one dataset)\n";
    }
    out << "mean CStest: " << std::fixed << std::setprecision(6) << report.mean_cs << "\n";
    return out.str();
}

} // namespace fedpnn
