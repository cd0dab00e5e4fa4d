#ifndef FEDPNN_DATASET_HPP
#define FEDPNN_DATASET_HPP

#include "fedpnn/types.hpp"

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

namespace fedpnn {

/// Column-wise minimum and maximum fitted on a training split.
struct NormalizationParams {
    RowVector min;
    RowVector max;
};

/// How the non-server rows are dealt among clients.
enum class Sharding { kSimpleRandom, kStratified };

Sharding sharding_from_string(const std::string& name);
std::string to_string(Sharding mode);

/// Disjoint, exhaustive row assignment: a stratified server reserve plus one
/// shard per client. Row order inside a shard is the (seeded) draw order.
struct PartitionPlan {
    std::vector<Index> server_rows;
    std::vector<std::vector<Index>> client_rows;
    std::uint64_t seed = 0;
    double b_percent = 10.0;
};

/// Loads a UTF-8 CSV with a header row; all cells numeric. label_col selects
/// the 0-based label column, -1 meaning the last column. Labels must be
/// exactly 0 or 1.
LabeledDataset load_csv(const std::filesystem::path& path, int label_col = -1);

void write_csv(const LabeledDataset& ds, const std::filesystem::path& path);

NormalizationParams normalize_fit(const LabeledDataset& train);

/// Maps each value through (x - min) / (max - min), clamped to [0, 1].
/// Constant columns (max == min) map to 0.
LabeledDataset normalize_apply(const NormalizationParams& params, const LabeledDataset& data);

/// Reserves round(n * b_percent / 100) rows for the server by stratified
/// random sampling, then deals the rest among num_clients shards.
PartitionPlan partition(const LabeledDataset& ds, int num_clients, double b_percent,
                        std::uint64_t seed, Sharding mode = Sharding::kSimpleRandom);

/// Per-class random split preserving class proportions within one row.
/// Both halves keep the original row order of the input.
std::pair<LabeledDataset, LabeledDataset>
stratified_split(const LabeledDataset& ds, double train_frac, std::uint64_t seed);

/// Keeps the k features with the largest absolute Welch two-sample
/// t-statistic between the classes; ties break toward the lower column index
/// and surviving columns keep their original order. Features with zero
/// variance in both classes score 0.
LabeledDataset select_features_tstat(const LabeledDataset& ds, Index k);

LabeledDataset take_rows(const LabeledDataset& ds, const std::vector<Index>& rows);

/// Audit/replay manifest: seed, b_percent, then one line per shard with
/// comma-separated row indices.
std::string format_partition_manifest(const PartitionPlan& plan);

} // namespace fedpnn

#endif
