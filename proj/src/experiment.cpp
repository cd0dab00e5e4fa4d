#include "fedpnn/experiment.hpp"

#include "fedpnn/svg_plot.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace fedpnn {

void RunSpec::validate() const {
    if (input.empty()) {
        throw ValidationError("config: 'input' path is required");
    }
    if (label_col < -1) {
        throw ValidationError("config: label_col must be -1 (last column) or a column index");
    }
    fed.validate();
}

RunSpec run_spec_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ValidationError("config must be a JSON object");
    }

    static const std::vector<std::string> known{
        "input",      "label_col", "clients",    "b_percent", "client_dthr",
        "server_dthr", "client_dthr_overrides",  "multiplier", "sigma",
        "train_frac", "seed",      "sharding"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ValidationError("config: unknown key '" + key + "'");
        }
    }

    RunSpec spec;
    try {
        spec.input = doc.value("input", std::string{});
        spec.label_col = doc.value("label_col", -1);
        spec.fed.num_clients = doc.value("clients", spec.fed.num_clients);
        spec.fed.b_percent = doc.value("b_percent", spec.fed.b_percent);
        spec.fed.client_dthr = doc.value("client_dthr", spec.fed.client_dthr);
        spec.fed.server_dthr = doc.value("server_dthr", spec.fed.server_dthr);
        spec.fed.multiplier = doc.value("multiplier", spec.fed.multiplier);
        spec.fed.sigma = doc.value("sigma", spec.fed.sigma);
        spec.fed.train_frac = doc.value("train_frac", spec.fed.train_frac);
        spec.fed.seed = doc.value("seed", spec.fed.seed);
        if (doc.contains("client_dthr_overrides")) {
            spec.fed.client_dthr_overrides =
                doc.at("client_dthr_overrides").get<std::vector<double>>();
        }
        if (doc.contains("sharding")) {
            spec.fed.client_sharding = sharding_from_string(doc.at("sharding").get<std::string>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    spec.validate();
    return spec;
}

RunSpec load_run_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open config file '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return run_spec_from_json(buffer.str());
}

std::string run_spec_to_json(const RunSpec& spec) {
    nlohmann::ordered_json doc;
    doc["input"] = spec.input;
    doc["label_col"] = spec.label_col;
    doc["clients"] = spec.fed.num_clients;
    doc["b_percent"] = spec.fed.b_percent;
    doc["client_dthr"] = spec.fed.client_dthr;
    doc["server_dthr"] = spec.fed.server_dthr;
    if (!spec.fed.client_dthr_overrides.empty()) {
        doc["client_dthr_overrides"] = spec.fed.client_dthr_overrides;
    }
    doc["multiplier"] = spec.fed.multiplier;
    doc["sigma"] = spec.fed.sigma;
    doc["train_frac"] = spec.fed.train_frac;
    doc["seed"] = spec.fed.seed;
    doc["sharding"] = to_string(spec.fed.client_sharding);
    return doc.dump(2) + "\n";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
    if (name == "client-dthr" || name == "client_dthr") {
        return SweepAxis::kClientDthr;
    }
    if (name == "server-dthr" || name == "server_dthr") {
        return SweepAxis::kServerDthr;
    }
    if (name == "sigma") {
        return SweepAxis::kSigma;
    }
    throw ValidationError("unknown sweep axis '" + name +
                          "' (expected client-dthr, server-dthr or sigma)");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::kClientDthr:
        return "client_dthr";
    case SweepAxis::kServerDthr:
        return "server_dthr";
    case SweepAxis::kSigma:
        return "sigma";
    }
    return "unknown";
}

void SweepSpec::validate() const {
    if (!(start < stop)) {
        throw ValidationError("sweep: start must be less than stop");
    }
    if (!(step > 0.0)) {
        throw ValidationError("sweep: step must be positive");
    }
    if (axis == SweepAxis::kClientDthr && !base.client_dthr_overrides.empty()) {
        throw ValidationError("sweep: cannot sweep client_dthr while per-client overrides are set");
    }
    base.validate();
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
    spec.validate();
    const auto count =
        static_cast<std::size_t>(std::floor((spec.stop - spec.start) / spec.step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = spec.start + static_cast<double>(i) * spec.step;
    }
    return grid;
}

std::vector<SweepRow> run_sweep(const LabeledDataset& ds, const SweepSpec& spec) {
    const auto grid = sweep_grid(spec);
    std::vector<SweepRow> rows;
    rows.reserve(grid.size() * static_cast<std::size_t>(spec.base.num_clients + 1));
    for (const double value : grid) {
        FederationConfig cfg = spec.base;
        switch (spec.axis) {
        case SweepAxis::kClientDthr:
            cfg.client_dthr = value;
            break;
        case SweepAxis::kServerDthr:
            cfg.server_dthr = value;
            break;
        case SweepAxis::kSigma:
            cfg.sigma = value;
            break;
        }
        const FederationReport report = run_one_shot(ds, cfg);
        for (const auto& client : report.clients) {
            SweepRow row;
            row.axis_value = value;
            row.node = "client_" + std::to_string(client.id);
            row.has_local_auc = true;
            row.local_auc = client.local_auc;
            row.global_auc = client.post_meta_auc;
            row.centers = client.local_centers;
            rows.push_back(std::move(row));
        }
        SweepRow server_row;
        server_row.axis_value = value;
        server_row.node = "server";
        server_row.global_auc = report.server_auc;
        server_row.centers = report.meta_centers;
        rows.push_back(std::move(server_row));
    }
    return rows;
}

std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows) {
    std::string csv = "axis_value,node,local_auc,global_auc,neg_centers,pos_centers\n";
    for (const auto& row : rows) {
        csv += format_double(row.axis_value) + "," + row.node + ",";
        csv += row.has_local_auc ? format_double(row.local_auc) : std::string{};
        csv += "," + format_double(row.global_auc) + "," + std::to_string(row.centers[0]) + "," +
               std::to_string(row.centers[1]) + "\n";
    }
    return csv;
}

void write_sweep_plots(const std::vector<SweepRow>& rows, const SweepSpec& spec,
                       const std::filesystem::path& prefix) {
    std::map<std::string, PlotSeries> auc_series;
    std::map<double, std::array<double, 2>> client_totals;
    std::map<double, std::array<double, 2>> meta_totals;
    for (const auto& row : rows) {
        auto& series = auc_series[row.node];
        series.label = row.node;
        series.x.push_back(row.axis_value);
        series.y.push_back(row.global_auc);
        if (row.node == "server") {
            meta_totals[row.axis_value] = {static_cast<double>(row.centers[0]),
                                           static_cast<double>(row.centers[1])};
        } else {
            auto& totals = client_totals[row.axis_value];
            totals[0] += static_cast<double>(row.centers[0]);
            totals[1] += static_cast<double>(row.centers[1]);
        }
    }

    std::vector<PlotSeries> auc_plot;
    for (auto& [node, series] : auc_series) {
        auc_plot.push_back(std::move(series));
    }
    write_line_chart_svg(prefix.string() + "_auc.svg", "AUC vs " + to_string(spec.axis),
                         to_string(spec.axis), "AUC", auc_plot);

    PlotSeries client_neg{"client_neg_centers", {}, {}};
    PlotSeries client_pos{"client_pos_centers", {}, {}};
    for (const auto& [value, totals] : client_totals) {
        client_neg.x.push_back(value);
        client_neg.y.push_back(totals[0]);
        client_pos.x.push_back(value);
        client_pos.y.push_back(totals[1]);
    }
    PlotSeries meta_neg{"meta_neg_centers", {}, {}};
    PlotSeries meta_pos{"meta_pos_centers", {}, {}};
    for (const auto& [value, totals] : meta_totals) {
        meta_neg.x.push_back(value);
        meta_neg.y.push_back(totals[0]);
        meta_pos.x.push_back(value);
        meta_pos.y.push_back(totals[1]);
    }
    write_line_chart_svg(prefix.string() + "_centers.svg",
                         "Centers vs " + to_string(spec.axis), to_string(spec.axis),
                         "center count", {client_neg, client_pos, meta_neg, meta_pos});
}

} // namespace fedpnn
