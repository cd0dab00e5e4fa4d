// Generates the bundled breast-cancer-like demo dataset: 699 rows, nine
// integer-valued cytology features in 1..10 and a binary label with the
// 458/241 benign/malignant split of the classic Wisconsin original. Feature
// marginals follow its published per-class means and standard deviations; a
// shared per-row severity factor induces the strong within-class feature
// correlation the real data shows. Swap in the real UCI file (same schema)
// any time; nothing downstream depends on this generator.

#include "fedpnn/dataset.hpp"
#include "fedpnn/rng.hpp"
#include "fedpnn/types.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct FeatureStats {
    const char* name;
    double benign_mean;
    double benign_sd;
    double malignant_mean;
    double malignant_sd;
};

constexpr FeatureStats kFeatures[] = {
    {"clump_thickness", 2.96, 1.67, 7.19, 2.43},
    {"cell_size_uniformity", 1.33, 0.91, 6.57, 2.72},
    {"cell_shape_uniformity", 1.44, 1.00, 6.56, 2.57},
    {"marginal_adhesion", 1.36, 0.92, 5.55, 3.21},
    {"epithelial_cell_size", 2.12, 0.92, 5.30, 2.45},
    {"bare_nuclei", 1.35, 1.18, 7.63, 3.12},
    {"bland_chromatin", 2.10, 1.08, 5.98, 2.27},
    {"normal_nucleoli", 1.29, 1.06, 5.86, 3.35},
    {"mitoses", 1.06, 0.50, 2.54, 2.55},
};

constexpr double kSeverityWeight = 0.6;
constexpr int kBenignRows = 458;
constexpr int kMalignantRows = 241;

} // namespace

int main(int argc, char** argv) {
    if (argc < 2 || argc > 4) {
        std::cerr << "usage: make_demo_data <out.csv> [seed] [rows]\n";
        return 1;
    }
    const std::string out_path = argv[1];
    const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 20240809ull;
    const int total = argc > 3 ? std::stoi(argv[3]) : kBenignRows + kMalignantRows;
    if (total < 4) {
        std::cerr << "need at least 4 rows\n";
        return 1;
    }
    const int malignant =
        std::max(2, static_cast<int>(std::llround(static_cast<double>(total) * kMalignantRows /
                                                  (kBenignRows + kMalignantRows))));
    const int benign = total - malignant;

    std::vector<int> labels(static_cast<std::size_t>(benign), 0);
    labels.insert(labels.end(), static_cast<std::size_t>(malignant), 1);
    fedpnn::Rng rng(fedpnn::mix_seed(seed, 1));
    rng.shuffle(labels);

    constexpr std::size_t d = sizeof(kFeatures) / sizeof(kFeatures[0]);
    fedpnn::LabeledDataset ds;
    ds.features.resize(total, static_cast<fedpnn::Index>(d));
    ds.labels.resize(total);
    for (const auto& f : kFeatures) {
        ds.feature_names.emplace_back(f.name);
    }

    fedpnn::Rng noise(fedpnn::mix_seed(seed, 2));
    const double residual = std::sqrt(1.0 - kSeverityWeight * kSeverityWeight);
    for (int i = 0; i < total; ++i) {
        const int label = labels[static_cast<std::size_t>(i)];
        ds.labels[i] = label;
        const double severity = noise.normal();
        for (std::size_t j = 0; j < d; ++j) {
            const auto& f = kFeatures[j];
            const double mean = label == 0 ? f.benign_mean : f.malignant_mean;
            const double sd = label == 0 ? f.benign_sd : f.malignant_sd;
            const double z = kSeverityWeight * severity + residual * noise.normal();
            const double raw = mean + sd * z;
            const auto value = std::clamp<long long>(std::llround(raw), 1, 10);
            ds.features(i, static_cast<fedpnn::Index>(j)) = static_cast<double>(value);
        }
    }

    fedpnn::write_csv(ds, out_path);
    std::cout << "wrote " << total << " rows (" << benign << " benign, " << malignant
              << " malignant) to " << out_path << "\n";
    return 0;
}
