#include "fedpnn/federation.hpp"

#include "fedpnn/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>

namespace fedpnn {

namespace {

constexpr std::uint64_t kClientSeedStream = 100; // + client id
constexpr int kUpdateVersion = 1;

void check_dthr(double value, const char* name) {
    if (!(value > 0.0 && value < 1.0)) {
        throw ValidationError(std::string(name) + " must lie in (0, 1)");
    }
}

// Prefixes an error with the failing pipeline stage, preserving its type.
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(name + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(name + ": " + e.what());
    }
}

} // namespace

void FederationConfig::validate() const {
    if (num_clients < 1) {
        throw ValidationError("client count must be at least 1");
    }
    if (!(b_percent > 0.0 && b_percent < 100.0)) {
        throw ValidationError("b_percent must lie in (0, 100)");
    }
    check_dthr(client_dthr, "client_dthr");
    check_dthr(server_dthr, "server_dthr");
    for (double v : client_dthr_overrides) {
        check_dthr(v, "client_dthr override");
    }
    if (!client_dthr_overrides.empty() &&
        static_cast<int>(client_dthr_overrides.size()) != num_clients) {
        throw ValidationError("client_dthr_overrides must list one value per client");
    }
    if (!(multiplier > 0.0) || !std::isfinite(multiplier)) {
        throw ValidationError("multiplier must be finite and positive");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("sigma must be finite and positive");
    }
    if (!(train_frac > 0.0 && train_frac < 1.0)) {
        throw ValidationError("train_frac must lie in (0, 1)");
    }
}

double FederationConfig::dthr_for_client(int client_id) const {
    if (client_id < 1 || client_id > num_clients) {
        throw ValidationError("client id " + std::to_string(client_id) + " out of range");
    }
    if (!client_dthr_overrides.empty()) {
        return client_dthr_overrides[static_cast<std::size_t>(client_id - 1)];
    }
    return client_dthr;
}

ClientResult client_update(const LabeledDataset& local, const FederationConfig& cfg,
                           int client_id, std::uint64_t client_seed) {
    check_dataset(local);
    const Index positives = local.labels.sum();
    if (positives == 0 || positives == local.rows()) {
        throw ValidationError("client shard holds a single class; cannot train");
    }

    auto [train, test] = stratified_split(local, cfg.train_frac, client_seed);
    const NormalizationParams params = normalize_fit(train);
    const LabeledDataset train_norm = normalize_apply(params, train);
    const LabeledDataset test_norm = normalize_apply(params, test);

    const EcmModel model = ecm_fit(train_norm.features, train_norm.labels,
                                   cfg.dthr_for_client(client_id), cfg.multiplier);
    const PnnModel pnn = pnn_from_clusters(model.clusters, cfg.sigma);

    ClientResult result;
    result.update.client_id = client_id;
    result.update.centers = model.clusters;
    result.local_auc = evaluate(pnn, test_norm);
    result.center_counts = count_centers_by_class(model.clusters);
    result.test_split = test_norm;
    return result;
}

std::vector<Cluster> meta_cluster(const std::vector<ClientUpdate>& updates,
                                  double server_dthr, double multiplier) {
    if (updates.empty()) {
        throw ValidationError("meta_cluster: empty update list");
    }
    std::vector<const ClientUpdate*> ordered;
    ordered.reserve(updates.size());
    for (const auto& u : updates) {
        if (u.centers.empty()) {
            throw ValidationError("meta_cluster: client " + std::to_string(u.client_id) +
                                  " sent no centers");
        }
        ordered.push_back(&u);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const ClientUpdate* a, const ClientUpdate* b) {
                         return a->client_id < b->client_id;
                     });

    const Index dims = ordered.front()->centers.front().center.size();
    EcmModel meta;
    meta.dthr = server_dthr;
    meta.multiplier = multiplier;
    for (const ClientUpdate* update : ordered) {
        for (const Cluster& c : update->centers) {
            if (c.center.size() != dims) {
                throw ValidationError("meta_cluster: dimension mismatch in update from client " +
                                      std::to_string(update->client_id));
            }
            meta.absorb(c.center, c.freq);
        }
    }
    return meta.clusters;
}

double server_evaluate(const std::vector<Cluster>& meta, const LabeledDataset& server_data,
                       double sigma) {
    if (meta.empty()) {
        throw ValidationError("server_evaluate: empty meta cluster list");
    }
    check_dataset(server_data);
    // the reserve is the only data the server holds, so it provides its own
    // normalization parameters
    const NormalizationParams params = normalize_fit(server_data);
    const LabeledDataset normalized = normalize_apply(params, server_data);
    const PnnModel pnn = pnn_from_clusters(meta, sigma);
    return evaluate(pnn, normalized);
}

std::vector<double> broadcast_and_reevaluate(const std::vector<Cluster>& meta,
                                             const std::vector<LabeledDataset>& client_tests,
                                             double sigma) {
    if (meta.empty()) {
        throw ValidationError("broadcast: empty meta cluster list");
    }
    const PnnModel pnn = pnn_from_clusters(meta, sigma);
    std::vector<double> aucs;
    aucs.reserve(client_tests.size());
    for (const auto& test : client_tests) {
        aucs.push_back(evaluate(pnn, test));
    }
    return aucs;
}

FederationReport run_one_shot(const LabeledDataset& ds, const FederationConfig& cfg) {
    cfg.validate();
    check_dataset(ds);

    const PartitionPlan plan = stage("partition", [&] {
        return partition(ds, cfg.num_clients, cfg.b_percent, cfg.seed, cfg.client_sharding);
    });
    const LabeledDataset server_shard = take_rows(ds, plan.server_rows);

    // clients run as isolated concurrent tasks; only update messages cross
    // the boundary back to the server
    std::vector<std::future<ClientResult>> futures;
    futures.reserve(static_cast<std::size_t>(cfg.num_clients));
    for (int k = 1; k <= cfg.num_clients; ++k) {
        futures.push_back(std::async(std::launch::async, [&, k] {
            return stage("client_update[" + std::to_string(k) + "]", [&] {
                const LabeledDataset shard =
                    take_rows(ds, plan.client_rows[static_cast<std::size_t>(k - 1)]);
                return client_update(shard, cfg, k,
                                     mix_seed(cfg.seed, kClientSeedStream + static_cast<std::uint64_t>(k)));
            });
        }));
    }

    std::int64_t messages = 0;
    std::vector<ClientResult> results;
    std::vector<ClientUpdate> updates;
    std::vector<LabeledDataset> test_splits;
    for (auto& f : futures) {
        ClientResult r = f.get();
        // every upload crosses the simulated wire once
        updates.push_back(deserialize_update(serialize_update(r.update)));
        ++messages;
        test_splits.push_back(r.test_split);
        results.push_back(std::move(r));
    }

    const std::vector<Cluster> meta = stage("meta_cluster", [&] {
        return meta_cluster(updates, cfg.server_dthr, cfg.multiplier);
    });
    const double server_auc =
        stage("server_evaluate", [&] { return server_evaluate(meta, server_shard, cfg.sigma); });
    const std::vector<double> post_auc = stage("broadcast", [&] {
        return broadcast_and_reevaluate(meta, test_splits, cfg.sigma);
    });
    messages += cfg.num_clients; // one broadcast delivery per client

    FederationReport report;
    report.config = cfg;
    report.server_auc = server_auc;
    report.meta_centers = count_centers_by_class(meta);
    report.messages_exchanged = messages;
    for (int k = 1; k <= cfg.num_clients; ++k) {
        const auto& r = results[static_cast<std::size_t>(k - 1)];
        report.clients.push_back({k, r.local_auc, r.center_counts,
                                  post_auc[static_cast<std::size_t>(k - 1)]});
    }
    return report;
}

std::string serialize_update(const ClientUpdate& update) {
    if (update.centers.empty()) {
        throw ValidationError("cannot serialize an update without centers");
    }
    const Index dims = update.centers.front().center.size();
    nlohmann::ordered_json doc;
    doc["version"] = kUpdateVersion;
    doc["client_id"] = update.client_id;
    doc["dim"] = dims;
    auto& centers = doc["centers"] = nlohmann::ordered_json::array();
    for (const auto& c : update.centers) {
        if (c.center.size() != dims) {
            throw ValidationError("update centers disagree on dimension");
        }
        nlohmann::ordered_json entry;
        auto& coords = entry["center"] = nlohmann::ordered_json::array();
        for (Index j = 0; j < dims; ++j) {
            coords.push_back(c.center[j]);
        }
        entry["radius"] = c.radius;
        entry["freq"] = {c.freq[0], c.freq[1]};
        centers.push_back(std::move(entry));
    }
    return doc.dump();
}

ClientUpdate deserialize_update(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("malformed update message at byte " + std::to_string(e.byte) + ": " +
                        e.what());
    }
    try {
        if (!doc.is_object()) {
            throw DataError("update message must be a JSON object");
        }
        const int version = doc.at("version").get<int>();
        if (version != kUpdateVersion) {
            throw DataError("unsupported update message version " + std::to_string(version));
        }
        ClientUpdate update;
        update.client_id = doc.at("client_id").get<int>();
        const Index dims = doc.at("dim").get<Index>();
        if (dims < 1) {
            throw DataError("update message declares a non-positive dimension");
        }
        const auto& centers = doc.at("centers");
        if (!centers.is_array() || centers.empty()) {
            throw DataError("update message holds no centers");
        }
        for (std::size_t i = 0; i < centers.size(); ++i) {
            const auto& entry = centers[i];
            const auto& coords = entry.at("center");
            if (!coords.is_array() || static_cast<Index>(coords.size()) != dims) {
                throw DataError("center " + std::to_string(i) +
                                " disagrees with the declared dimension");
            }
            Cluster c;
            c.center.resize(dims);
            for (Index j = 0; j < dims; ++j) {
                c.center[j] = coords[static_cast<std::size_t>(j)].get<double>();
            }
            c.radius = entry.at("radius").get<double>();
            if (!(c.radius >= 0.0) || !std::isfinite(c.radius)) {
                throw DataError("center " + std::to_string(i) + " has an invalid radius");
            }
            const auto& freq = entry.at("freq");
            if (!freq.is_array() || freq.size() != 2) {
                throw DataError("center " + std::to_string(i) + " needs a two-class freq vector");
            }
            c.freq[0] = freq[0].get<std::int64_t>();
            c.freq[1] = freq[1].get<std::int64_t>();
            if (c.freq[0] < 0 || c.freq[1] < 0 || c.freq[0] + c.freq[1] < 1) {
                throw DataError("center " + std::to_string(i) + " has an invalid freq vector");
            }
            update.centers.push_back(std::move(c));
        }
        return update;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid update message: ") + e.what());
    }
}

std::string format_report(const FederationReport& report) {
    std::ostringstream out;
    const auto& cfg = report.config;
    out << "FedPNN one-shot federation report\n";
    out << "=================================\n";
    out << "clients: " << cfg.num_clients << "\n";
    out << "b_percent: " << format_double(cfg.b_percent) << "\n";
    out << "client_dthr: " << format_double(cfg.client_dthr) << "\n";
    out << "server_dthr: " << format_double(cfg.server_dthr) << "\n";
    out << "multiplier: " << format_double(cfg.multiplier) << "\n";
    out << "sigma: " << format_double(cfg.sigma) << "\n";
    out << "train_frac: " << format_double(cfg.train_frac) << "\n";
    out << "seed: " << cfg.seed << "\n";
    out << "sharding: " << to_string(cfg.client_sharding) << "\n\n";

    out << std::left << std::setw(12) << "node" << std::setw(12) << "local_auc" << std::setw(24)
        << "local_centers(neg;pos)" << "post_meta_auc\n";
    out << std::fixed << std::setprecision(6);
    for (const auto& row : report.clients) {
        out << std::setw(12) << ("client_" + std::to_string(row.id)) << std::setw(12)
            << row.local_auc << std::setw(24)
            << ("(" + std::to_string(row.local_centers[0]) + ";" +
                std::to_string(row.local_centers[1]) + ")")
            << row.post_meta_auc << "\n";
    }
    out << std::setw(12) << "server" << std::setw(12) << "-" << std::setw(24) << "-"
        << report.server_auc << "\n\n";
    out << "meta_centers(neg;pos): (" << report.meta_centers[0] << ";" << report.meta_centers[1]
        << ")\n";
    out << "messages_exchanged: " << report.messages_exchanged << "\n";
    return out.str();
}

} // namespace fedpnn
