#include "fedpnn/dataset.hpp"

#include "fedpnn/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace fedpnn {

namespace {

// Sub-stream tags for mix_seed; fixed so that every sampling site draws from
// its own reproducible stream.
constexpr std::uint64_t kServerSampleStream = 10; // + class index
constexpr std::uint64_t kClientPoolStream = 20;
constexpr std::uint64_t kClientClassStream = 30; // + class index
constexpr std::uint64_t kSplitStream = 40;       // + class index

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

// Largest-remainder apportionment of `total` over `weights`; tie on the
// fractional part goes to the lower index.
std::vector<Index> apportion(const std::vector<Index>& weights, Index total) {
    const Index sum = std::accumulate(weights.begin(), weights.end(), Index{0});
    std::vector<Index> base(weights.size());
    std::vector<double> remainder(weights.size());
    Index assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double share =
            static_cast<double>(total) * static_cast<double>(weights[i]) / static_cast<double>(sum);
        base[i] = static_cast<Index>(std::floor(share));
        remainder[i] = share - std::floor(share);
        assigned += base[i];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (Index extra = 0; extra < total - assigned; ++extra) {
        ++base[order[static_cast<std::size_t>(extra)]];
    }
    return base;
}

std::vector<std::vector<Index>> rows_by_class(const LabeledDataset& ds) {
    std::vector<std::vector<Index>> by_class(2);
    for (Index i = 0; i < ds.rows(); ++i) {
        by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);
    }
    return by_class;
}

} // namespace

Sharding sharding_from_string(const std::string& name) {
    if (name == "simple-random") {
        return Sharding::kSimpleRandom;
    }
    if (name == "stratified") {
        return Sharding::kStratified;
    }
    throw ValidationError("unknown sharding mode '" + name +
                          "' (expected simple-random or stratified)");
}

std::string to_string(Sharding mode) {
    return mode == Sharding::kSimpleRandom ? "simple-random" : "stratified";
}

LabeledDataset load_csv(const std::filesystem::path& path, int label_col) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open file '" + path.string() + "'");
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("empty file '" + path.string() + "'");
    }
    const auto header = split_line(line);
    const Index ncols = static_cast<Index>(header.size());
    if (ncols < 2) {
        throw DataError("header must list at least one feature column and a label column");
    }

    Index label_idx = ncols - 1;
    if (label_col >= 0) {
        if (label_col >= ncols) {
            throw ValidationError("label column index " + std::to_string(label_col) +
                                  " out of range for " + std::to_string(ncols) + " columns");
        }
        label_idx = label_col;
    }

    std::vector<std::string> feature_names;
    for (Index j = 0; j < ncols; ++j) {
        if (j != label_idx) {
            feature_names.push_back(trim(header[static_cast<std::size_t>(j)]));
        }
    }

    std::vector<double> values;
    std::vector<int> labels;
    Index row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        ++row;
        const auto cells = split_line(line);
        if (static_cast<Index>(cells.size()) != ncols) {
            throw DataError("row " + std::to_string(row) + ": expected " + std::to_string(ncols) +
                            " columns, found " + std::to_string(cells.size()));
        }
        for (Index j = 0; j < ncols; ++j) {
            const std::string cell = trim(cells[static_cast<std::size_t>(j)]);
            double v = 0.0;
            if (!parse_double(cell, v)) {
                throw DataError("non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                                ", column '" + trim(header[static_cast<std::size_t>(j)]) + "'");
            }
            if (j == label_idx) {
                if (v != 0.0 && v != 1.0) {
                    throw DataError("label outside {0,1} at row " + std::to_string(row));
                }
                labels.push_back(static_cast<int>(v));
            } else {
                if (!std::isfinite(v)) {
                    throw DataError("non-finite value at row " + std::to_string(row) +
                                    ", column '" + trim(header[static_cast<std::size_t>(j)]) + "'");
                }
                values.push_back(v);
            }
        }
    }
    if (row == 0) {
        throw DataError("no data rows in '" + path.string() + "'");
    }

    LabeledDataset ds;
    const Index d = ncols - 1;
    ds.features.resize(row, d);
    ds.labels.resize(row);
    for (Index i = 0; i < row; ++i) {
        ds.labels[i] = labels[static_cast<std::size_t>(i)];
        for (Index j = 0; j < d; ++j) {
            ds.features(i, j) = values[static_cast<std::size_t>(i * d + j)];
        }
    }
    ds.feature_names = std::move(feature_names);
    return ds;
}

void write_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
    check_dataset(ds);
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file '" + path.string() + "'");
    }
    for (Index j = 0; j < ds.dims(); ++j) {
        out << ds.feature_names[static_cast<std::size_t>(j)] << ',';
    }
    out << "label\n";
    for (Index i = 0; i < ds.rows(); ++i) {
        for (Index j = 0; j < ds.dims(); ++j) {
            out << format_double(ds.features(i, j)) << ',';
        }
        out << ds.labels[i] << '\n';
    }
}

NormalizationParams normalize_fit(const LabeledDataset& train) {
    check_dataset(train);
    NormalizationParams params;
    params.min = train.features.colwise().minCoeff();
    params.max = train.features.colwise().maxCoeff();
    return params;
}

LabeledDataset normalize_apply(const NormalizationParams& params, const LabeledDataset& data) {
    check_dataset(data);
    if (params.min.size() != data.dims() || params.max.size() != data.dims()) {
        throw ValidationError("normalization dimension mismatch: params have " +
                              std::to_string(params.min.size()) + " columns, data has " +
                              std::to_string(data.dims()));
    }
    LabeledDataset out;
    out.labels = data.labels;
    out.feature_names = data.feature_names;
    out.features.resize(data.rows(), data.dims());
    for (Index j = 0; j < data.dims(); ++j) {
        const double lo = params.min[j];
        const double hi = params.max[j];
        if (hi < lo) {
            throw ValidationError("normalization params have min > max in column " +
                                  std::to_string(j));
        }
        if (hi == lo) {
            out.features.col(j).setZero();
        } else {
            out.features.col(j) = ((data.features.col(j).array() - lo) / (hi - lo))
                                      .cwiseMax(0.0)
                                      .cwiseMin(1.0);
        }
    }
    return out;
}

PartitionPlan partition(const LabeledDataset& ds, int num_clients, double b_percent,
                        std::uint64_t seed, Sharding mode) {
    check_dataset(ds);
    if (num_clients < 1) {
        throw ValidationError("client count must be at least 1");
    }
    if (!(b_percent > 0.0 && b_percent < 100.0)) {
        throw ValidationError("b_percent must lie in (0, 100)");
    }

    auto by_class = rows_by_class(ds);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (static_cast<int>(by_class[c].size()) < num_clients + 1) {
            throw ValidationError("class " + std::to_string(c) + " has only " +
                                  std::to_string(by_class[c].size()) +
                                  " rows; need at least clients + 1 to stratify");
        }
    }

    const Index n = ds.rows();
    const Index server_total =
        static_cast<Index>(std::llround(static_cast<double>(n) * b_percent / 100.0));
    std::vector<Index> class_counts{static_cast<Index>(by_class[0].size()),
                                    static_cast<Index>(by_class[1].size())};
    const auto server_per_class = apportion(class_counts, server_total);

    PartitionPlan plan;
    plan.seed = seed;
    plan.b_percent = b_percent;
    plan.client_rows.resize(static_cast<std::size_t>(num_clients));

    std::vector<std::vector<Index>> leftovers(2);
    for (std::size_t c = 0; c < 2; ++c) {
        auto rows = by_class[c];
        Rng rng(mix_seed(seed, kServerSampleStream + c));
        rng.shuffle(rows);
        const auto take = static_cast<std::size_t>(server_per_class[c]);
        plan.server_rows.insert(plan.server_rows.end(), rows.begin(),
                                rows.begin() + static_cast<std::ptrdiff_t>(take));
        leftovers[c].assign(rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
    }

    if (mode == Sharding::kSimpleRandom) {
        std::vector<Index> pool;
        pool.insert(pool.end(), leftovers[0].begin(), leftovers[0].end());
        pool.insert(pool.end(), leftovers[1].begin(), leftovers[1].end());
        std::sort(pool.begin(), pool.end());
        Rng rng(mix_seed(seed, kClientPoolStream));
        rng.shuffle(pool);
        const Index remaining = static_cast<Index>(pool.size());
        const Index base = remaining / num_clients;
        const Index extras = remaining % num_clients;
        std::size_t cursor = 0;
        for (int k = 0; k < num_clients; ++k) {
            const Index size = base + (k < extras ? 1 : 0);
            auto& shard = plan.client_rows[static_cast<std::size_t>(k)];
            shard.assign(pool.begin() + static_cast<std::ptrdiff_t>(cursor),
                         pool.begin() + static_cast<std::ptrdiff_t>(cursor + size));
            cursor += static_cast<std::size_t>(size);
        }
    } else {
        for (std::size_t c = 0; c < 2; ++c) {
            auto rows = leftovers[c];
            Rng rng(mix_seed(seed, kClientClassStream + c));
            rng.shuffle(rows);
            const Index m = static_cast<Index>(rows.size());
            const Index base = m / num_clients;
            const Index extras = m % num_clients;
            std::size_t cursor = 0;
            for (int k = 0; k < num_clients; ++k) {
                // rotate which clients receive the per-class extras so size
                // imbalance does not pile onto the first clients
                const int slot = static_cast<int>((k + static_cast<int>(c)) % num_clients);
                const Index size = base + (slot < extras ? 1 : 0);
                auto& shard = plan.client_rows[static_cast<std::size_t>(k)];
                shard.insert(shard.end(), rows.begin() + static_cast<std::ptrdiff_t>(cursor),
                             rows.begin() + static_cast<std::ptrdiff_t>(cursor + size));
                cursor += static_cast<std::size_t>(size);
            }
        }
    }
    return plan;
}

std::pair<LabeledDataset, LabeledDataset>
stratified_split(const LabeledDataset& ds, double train_frac, std::uint64_t seed) {
    check_dataset(ds);
    if (!(train_frac > 0.0 && train_frac < 1.0)) {
        throw ValidationError("train fraction must lie in (0, 1)");
    }
    auto by_class = rows_by_class(ds);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (by_class[c].size() < 2) {
            throw ValidationError("class " + std::to_string(c) +
                                  " has fewer than 2 rows; cannot split");
        }
    }

    std::vector<Index> train_rows;
    std::vector<Index> test_rows;
    for (std::size_t c = 0; c < 2; ++c) {
        auto rows = by_class[c];
        Rng rng(mix_seed(seed, kSplitStream + c));
        rng.shuffle(rows);
        const Index n_c = static_cast<Index>(rows.size());
        Index n_train = static_cast<Index>(std::llround(static_cast<double>(n_c) * train_frac));
        n_train = std::clamp(n_train, Index{1}, n_c - 1);
        train_rows.insert(train_rows.end(), rows.begin(),
                          rows.begin() + static_cast<std::ptrdiff_t>(n_train));
        test_rows.insert(test_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train),
                         rows.end());
    }
    // keep the dataset's natural row order on both sides
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return {take_rows(ds, train_rows), take_rows(ds, test_rows)};
}

LabeledDataset select_features_tstat(const LabeledDataset& ds, Index k) {
    check_dataset(ds);
    if (k < 1 || k > ds.dims()) {
        throw ValidationError("feature count k must lie in [1, d]");
    }
    auto by_class = rows_by_class(ds);
    if (by_class[0].empty() || by_class[1].empty()) {
        throw ValidationError("t-statistic feature selection needs both classes present");
    }

    const Index d = ds.dims();
    std::vector<double> abs_t(static_cast<std::size_t>(d), 0.0);
    for (Index j = 0; j < d; ++j) {
        double mean[2] = {0.0, 0.0};
        double var[2] = {0.0, 0.0};
        for (std::size_t c = 0; c < 2; ++c) {
            const auto& rows = by_class[c];
            const double n_c = static_cast<double>(rows.size());
            double sum = 0.0;
            for (Index i : rows) {
                sum += ds.features(i, j);
            }
            mean[c] = sum / n_c;
            if (rows.size() >= 2) {
                double ss = 0.0;
                for (Index i : rows) {
                    const double dlt = ds.features(i, j) - mean[c];
                    ss += dlt * dlt;
                }
                var[c] = ss / (n_c - 1.0);
            }
        }
        const double denom = std::sqrt(var[0] / static_cast<double>(by_class[0].size()) +
                                       var[1] / static_cast<double>(by_class[1].size()));
        abs_t[static_cast<std::size_t>(j)] =
            denom > 0.0 ? std::abs((mean[0] - mean[1]) / denom) : 0.0;
    }

    std::vector<Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return abs_t[static_cast<std::size_t>(a)] > abs_t[static_cast<std::size_t>(b)];
    });
    std::vector<Index> keep(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(keep.begin(), keep.end());

    LabeledDataset out;
    out.labels = ds.labels;
    out.features.resize(ds.rows(), k);
    for (Index jj = 0; jj < k; ++jj) {
        out.features.col(jj) = ds.features.col(keep[static_cast<std::size_t>(jj)]);
        out.feature_names.push_back(
            ds.feature_names[static_cast<std::size_t>(keep[static_cast<std::size_t>(jj)])]);
    }
    return out;
}

LabeledDataset take_rows(const LabeledDataset& ds, const std::vector<Index>& rows) {
    LabeledDataset out;
    out.feature_names = ds.feature_names;
    out.features.resize(static_cast<Index>(rows.size()), ds.dims());
    out.labels.resize(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] < 0 || rows[i] >= ds.rows()) {
            throw ValidationError("row index " + std::to_string(rows[i]) + " out of range");
        }
        out.features.row(static_cast<Index>(i)) = ds.features.row(rows[i]);
        out.labels[static_cast<Index>(i)] = ds.labels[rows[i]];
    }
    return out;
}

std::string format_partition_manifest(const PartitionPlan& plan) {
    std::string text;
    text += "seed: " + std::to_string(plan.seed) + "\n";
    text += "b_percent: " + format_double(plan.b_percent) + "\n";
    auto append_shard = [&text](const std::string& name, const std::vector<Index>& rows) {
        text += name + ":";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            text += (i == 0 ? " " : ",") + std::to_string(rows[i]);
        }
        text += "\n";
    };
    append_shard("server", plan.server_rows);
    for (std::size_t k = 0; k < plan.client_rows.size(); ++k) {
        append_shard("client_" + std::to_string(k + 1), plan.client_rows[k]);
    }
    return text;
}

} // namespace fedpnn
