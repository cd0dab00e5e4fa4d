#include "fedpnn/ecm.hpp"

#include <algorithm>
#include <limits>

namespace fedpnn {

int cluster_label(const Cluster& c) {
    if (c.freq[0] + c.freq[1] < 1) {
        throw ValidationError("cluster has an all-zero frequency vector");
    }
    return c.freq[1] > c.freq[0] ? 1 : 0;
}

std::array<std::int64_t, 2> count_centers_by_class(const std::vector<Cluster>& clusters) {
    std::array<std::int64_t, 2> counts{0, 0};
    for (const auto& c : clusters) {
        ++counts[static_cast<std::size_t>(cluster_label(c))];
    }
    return counts;
}

void EcmModel::absorb(const RowVector& x, const std::array<std::int64_t, 2>& freq_delta) {
    if (!clusters.empty() && x.size() != clusters.front().center.size()) {
        throw ValidationError("ecm: point dimension does not match the model");
    }
    ++points_seen;
    if (clusters.empty()) {
        clusters.push_back(Cluster{x, 0.0, freq_delta});
        return;
    }

    const std::size_t count = clusters.size();
    std::vector<double> dist(count);
    std::size_t nearest = 0;
    for (std::size_t h = 0; h < count; ++h) {
        dist[h] = normalized_distance(x, clusters[h].center);
        if (dist[h] < dist[nearest]) {
            nearest = h;
        }
    }

    // point already covered: only the class counts change
    if (dist[nearest] <= clusters[nearest].radius) {
        clusters[nearest].freq[0] += freq_delta[0];
        clusters[nearest].freq[1] += freq_delta[1];
        return;
    }

    std::size_t best = 0;
    double s_best = std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < count; ++h) {
        const double s = dist[h] + clusters[h].radius;
        if (s < s_best) {
            s_best = s;
            best = h;
        }
    }

    if (s_best > multiplier * dthr) {
        clusters.push_back(Cluster{x, 0.0, freq_delta});
        return;
    }

    Cluster& c = clusters[best];
    c.radius = s_best / 2.0;
    const double temp = dist[best];
    if (temp > 0.0) {
        const double ratio = std::min(std::abs(temp - c.radius) / temp, 1.0);
        c.center += (x - c.center) * ratio;
        // guard against one-ulp overshoot at the hypercube boundary
        c.center = c.center.cwiseMax(0.0).cwiseMin(1.0);
    }
    c.freq[0] += freq_delta[0];
    c.freq[1] += freq_delta[1];
}

void ecm_update(EcmModel& model, const RowVector& x, int label) {
    if (label != 0 && label != 1) {
        throw ValidationError("label outside {0,1}");
    }
    std::array<std::int64_t, 2> one_hot{0, 0};
    one_hot[static_cast<std::size_t>(label)] = 1;
    model.absorb(x, one_hot);
}

EcmModel ecm_fit(const Eigen::Ref<const Matrix>& points, const IntVector& labels,
                 double dthr, double multiplier) {
    if (points.rows() < 1) {
        throw ValidationError("ecm_fit: empty input");
    }
    if (labels.size() != points.rows()) {
        throw ValidationError("ecm_fit: labels and points disagree on row count");
    }
    if (!(dthr >= 0.0) || !std::isfinite(dthr)) {
        throw ValidationError("ecm_fit: dthr must be finite and non-negative");
    }
    if (!(multiplier > 0.0) || !std::isfinite(multiplier)) {
        throw ValidationError("ecm_fit: multiplier must be finite and positive");
    }
    EcmModel model;
    model.dthr = dthr;
    model.multiplier = multiplier;
    for (Index i = 0; i < points.rows(); ++i) {
        ecm_update(model, points.row(i), labels[i]);
    }
    return model;
}

} // namespace fedpnn
