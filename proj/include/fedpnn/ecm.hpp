#ifndef FEDPNN_ECM_HPP
#define FEDPNN_ECM_HPP

#include "fedpnn/types.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace fedpnn {

/// One evolving cluster: a center in [0,1]^d, its radius in normalized
/// distance units, and per-class counts of the points it has absorbed.
struct Cluster {
    RowVector center;
    double radius = 0.0;
    std::array<std::int64_t, 2> freq{0, 0};
};

/// Majority class of a cluster; a tie goes to class 0. Throws on all-zero freq.
int cluster_label(const Cluster& c);

/// Counts clusters by majority class, returned as {negative, positive}.
std::array<std::int64_t, 2> count_centers_by_class(const std::vector<Cluster>& clusters);

/// Euclidean distance scaled by 1/sqrt(d), so any two points of the unit
/// hypercube are at most distance 1 apart.
template <typename DerivedA, typename DerivedB>
double normalized_distance(const Eigen::MatrixBase<DerivedA>& x,
                           const Eigen::MatrixBase<DerivedB>& y) {
    if (x.size() == 0 || x.size() != y.size()) {
        throw ValidationError("normalized_distance: dimension mismatch");
    }
    return (x - y).norm() / std::sqrt(static_cast<double>(x.size()));
}

/// One-pass evolving clustering state. Clusters grow in input order: a point
/// inside the nearest cluster's radius only bumps its counts; a point farther
/// than multiplier * dthr from every (distance + radius) spawns a new cluster;
/// anything in between widens the best cluster to half that sum and drags its
/// center toward the point.
struct EcmModel {
    std::vector<Cluster> clusters;
    double dthr = 0.1;
    double multiplier = 2.0;
    std::int64_t points_seen = 0;

    /// Folds one point into the model. freq_delta is added to whichever
    /// cluster absorbs the point: one-hot when fitting raw rows, a full
    /// frequency vector when meta-clustering client centers.
    void absorb(const RowVector& x, const std::array<std::int64_t, 2>& freq_delta);
};

/// Single Algorithm step for a labeled point.
void ecm_update(EcmModel& model, const RowVector& x, int label);

/// Folds every row, in order, into a fresh model. Order-dependent and
/// deterministic: the same sequence always yields a bit-identical model.
EcmModel ecm_fit(const Eigen::Ref<const Matrix>& points, const IntVector& labels,
                 double dthr, double multiplier = 2.0);

} // namespace fedpnn

#endif
