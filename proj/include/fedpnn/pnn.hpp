#ifndef FEDPNN_PNN_HPP
#define FEDPNN_PNN_HPP

#include "fedpnn/ecm.hpp"
#include "fedpnn/types.hpp"

#include <array>
#include <vector>

namespace fedpnn {

/// Parzen-kernel classifier over stored centers, grouped by class. Immutable
/// after construction; scoring and evaluation are pure.
struct PnnModel {
    std::array<Matrix, 2> class_groups; // one center per row
    double sigma = 0.1;
    Index dims = 0;
};

/// Places each cluster's center into the group of its majority class.
PnnModel pnn_from_clusters(const std::vector<Cluster>& clusters, double sigma);

/// Per-class Gaussian kernel density at x:
///   f_A(x) = sum_i exp(-dist(x, c_i)^2 / (2 sigma^2)) / (n_A (2 pi)^{d/2} sigma^d)
/// with dist the normalized (1/sqrt(d)-scaled) Euclidean distance.
std::array<double, 2> pnn_score(const PnnModel& model, const RowVector& x);

/// Argmax class of pnn_score. An exact nonzero tie goes to class 0; if both
/// densities underflow to zero the class of the nearest center wins.
int pnn_predict(const PnnModel& model, const RowVector& x);

/// Balanced accuracy (sensitivity + specificity) / 2 over hard predictions,
/// with class 1 as the positive class. This is the AUC figure the reports
/// quote; it is not ROC area.
double evaluate(const PnnModel& model, const LabeledDataset& test);

} // namespace fedpnn

#endif
