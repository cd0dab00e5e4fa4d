#include "fedpnn/pnn.hpp"

#include "fedpnn/synthmetrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace fedpnn {

PnnModel pnn_from_clusters(const std::vector<Cluster>& clusters, double sigma) {
    if (clusters.empty()) {
        throw ValidationError("cannot build a PNN from an empty cluster list");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("sigma must be finite and positive");
    }

    PnnModel model;
    model.sigma = sigma;
    model.dims = clusters.front().center.size();

    std::array<std::vector<const Cluster*>, 2> grouped;
    for (const auto& c : clusters) {
        if (c.center.size() != model.dims) {
            throw ValidationError("cluster centers disagree on dimension");
        }
        grouped[static_cast<std::size_t>(cluster_label(c))].push_back(&c);
    }
    for (std::size_t g = 0; g < 2; ++g) {
        model.class_groups[g].resize(static_cast<Index>(grouped[g].size()), model.dims);
        for (std::size_t i = 0; i < grouped[g].size(); ++i) {
            model.class_groups[g].row(static_cast<Index>(i)) = grouped[g][i]->center;
        }
    }
    return model;
}

std::array<double, 2> pnn_score(const PnnModel& model, const RowVector& x) {
    if (x.size() != model.dims) {
        throw ValidationError("query dimension does not match the model");
    }
    if (model.class_groups[0].rows() == 0 || model.class_groups[1].rows() == 0) {
        throw ValidationError("PNN prediction requires centers of both classes");
    }

    const double d = static_cast<double>(model.dims);
    const double two_sigma_sq = 2.0 * model.sigma * model.sigma;
    std::array<double, 2> scores{0.0, 0.0};
    for (std::size_t g = 0; g < 2; ++g) {
        const Matrix& centers = model.class_groups[g];
        const double n = static_cast<double>(centers.rows());
        // squared normalized distances to every stored center
        const Vector sq_dist = (centers.rowwise() - x).rowwise().squaredNorm() / d;
        const double kernel_sum = (-(sq_dist.array()) / two_sigma_sq).exp().sum();
        const double norm_const =
            n * std::pow(2.0 * std::numbers::pi, d / 2.0) * std::pow(model.sigma, d);
        scores[g] = kernel_sum / norm_const;
    }
    return scores;
}

int pnn_predict(const PnnModel& model, const RowVector& x) {
    const auto scores = pnn_score(model, x);
    if (scores[0] > scores[1]) {
        return 0;
    }
    if (scores[1] > scores[0]) {
        return 1;
    }
    if (scores[0] != 0.0) {
        return 0; // exact nonzero tie
    }
    // both densities underflowed: fall back to the nearest center's class
    std::array<double, 2> nearest{std::numeric_limits<double>::infinity(),
                                  std::numeric_limits<double>::infinity()};
    for (std::size_t g = 0; g < 2; ++g) {
        for (Index i = 0; i < model.class_groups[g].rows(); ++i) {
            nearest[g] = std::min(nearest[g], normalized_distance(x, model.class_groups[g].row(i)));
        }
    }
    return nearest[0] <= nearest[1] ? 0 : 1;
}

double evaluate(const PnnModel& model, const LabeledDataset& test) {
    check_dataset(test);
    if (test.dims() != model.dims) {
        throw ValidationError("test dimension does not match the model");
    }
    const Index positives = test.labels.sum();
    if (positives == 0 || positives == test.rows()) {
        throw ValidationError("evaluation needs both classes in the test set");
    }

    std::int64_t tp = 0, fn = 0, tn = 0, fp = 0;
    for (Index i = 0; i < test.rows(); ++i) {
        const int predicted = pnn_predict(model, test.features.row(i));
        if (test.labels[i] == 1) {
            predicted == 1 ? ++tp : ++fn;
        } else {
            predicted == 0 ? ++tn : ++fp;
        }
    }
    return auc_from_counts(tp, fn, tn, fp);
}

} // namespace fedpnn
