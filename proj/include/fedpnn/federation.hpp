#ifndef FEDPNN_FEDERATION_HPP
#define FEDPNN_FEDERATION_HPP

#include "fedpnn/dataset.hpp"
#include "fedpnn/ecm.hpp"
#include "fedpnn/pnn.hpp"
#include "fedpnn/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fedpnn {

/// Parameters of one simulated one-shot federation run. Every field has a
/// default; the dthr defaults suit the bundled breast cancer data.
struct FederationConfig {
    int num_clients = 2;
    double b_percent = 10.0;
    double client_dthr = 0.19;
    double server_dthr = 0.17;
    double multiplier = 2.0;
    double sigma = 0.1;
    double train_frac = 0.8;
    std::uint64_t seed = 0;
    Sharding client_sharding = Sharding::kSimpleRandom;
    std::vector<double> client_dthr_overrides; // optional, one per client

    void validate() const;
    double dthr_for_client(int client_id) const; // client ids are 1-based
};

/// What a client uploads: its cluster centers with radii and class counts.
/// Raw rows never leave the client.
struct ClientUpdate {
    int client_id = 0;
    std::vector<Cluster> centers;
};

/// Local phase output kept on the client side of the simulation.
struct ClientResult {
    ClientUpdate update;
    double local_auc = 0.0;
    std::array<std::int64_t, 2> center_counts{0, 0};
    LabeledDataset test_split; // normalized 20% split, reused after broadcast
};

struct FederationReport {
    struct ClientRow {
        int id = 0;
        double local_auc = 0.0;
        std::array<std::int64_t, 2> local_centers{0, 0};
        double post_meta_auc = 0.0;
    };

    FederationConfig config;
    std::vector<ClientRow> clients;
    double server_auc = 0.0;
    std::array<std::int64_t, 2> meta_centers{0, 0};
    std::int64_t messages_exchanged = 0;
};

/// Client-side phase: stratified 80:20 split, local min-max normalization,
/// ECM fit, PNN evaluation on the local test split.
ClientResult client_update(const LabeledDataset& local, const FederationConfig& cfg,
                           int client_id, std::uint64_t client_seed);

/// Server-side aggregation: one ECM pass over the concatenated client centers
/// (clients in id order, centers in emission order). Absorbing a center adds
/// its whole frequency vector, so totals are conserved exactly. Incoming
/// centers are already in [0,1]^d; no re-normalization happens here.
std::vector<Cluster> meta_cluster(const std::vector<ClientUpdate>& updates,
                                  double server_dthr, double multiplier);

/// Scores the meta model on the server's reserve shard, used wholly as test
/// data. The reserve is min-max normalized with parameters fitted on itself
/// (the server holds no training data).
double server_evaluate(const std::vector<Cluster>& meta,
                       const LabeledDataset& server_data, double sigma);

/// Each client rebuilds its pattern layer from the meta centers and re-scores
/// its own retained test split.
std::vector<double> broadcast_and_reevaluate(const std::vector<Cluster>& meta,
                                             const std::vector<LabeledDataset>& client_tests,
                                             double sigma);

/// Full one-shot pipeline: partition, K client updates, meta-clustering,
/// server evaluation, broadcast re-evaluation. Exactly one upload and one
/// broadcast per client; deterministic for a fixed (dataset, config).
FederationReport run_one_shot(const LabeledDataset& ds, const FederationConfig& cfg);

/// Wire format for a ClientUpdate: a JSON text record with fields version
/// (=1), client_id, dim and centers[{center, radius, freq}]. Center values
/// round-trip bit-exactly (shortest decimal representation).
std::string serialize_update(const ClientUpdate& update);
ClientUpdate deserialize_update(std::string_view text);

/// Fixed-layout text document: the config echo, one row per node with local
/// and post-meta AUC and center counts, then the meta totals.
std::string format_report(const FederationReport& report);

} // namespace fedpnn

#endif
