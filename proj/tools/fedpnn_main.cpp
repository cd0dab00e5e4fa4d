#include "fedpnn/dataset.hpp"
#include "fedpnn/experiment.hpp"
#include "fedpnn/federation.hpp"
#include "fedpnn/synthmetrics.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace fedpnn;

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write output file '" + path.string() + "'");
    }
    out << text;
}

struct RunFlags {
    std::string config_path;
    std::string input;
    int label_col = -1;
    int clients = 2;
    double server_frac = 10.0;
    double client_dthr = 0.19;
    double server_dthr = 0.17;
    double multiplier = 2.0;
    double sigma = 0.1;
    double train_frac = 0.8;
    std::uint64_t seed = 0;
    std::string sharding = "simple-random";
};

// Registers the shared federation flags on a subcommand and returns the
// option handles so explicitly-set flags can override a config file.
struct RunOptionSet {
    CLI::Option* input = nullptr;
    CLI::Option* label_col = nullptr;
    CLI::Option* clients = nullptr;
    CLI::Option* server_frac = nullptr;
    CLI::Option* client_dthr = nullptr;
    CLI::Option* server_dthr = nullptr;
    CLI::Option* multiplier = nullptr;
    CLI::Option* sigma = nullptr;
    CLI::Option* train_frac = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* sharding = nullptr;
};

RunOptionSet add_federation_flags(CLI::App* cmd, RunFlags& flags) {
    RunOptionSet opts;
    opts.input = cmd->add_option("--input", flags.input, "input CSV (header row, numeric cells)");
    opts.label_col =
        cmd->add_option("--label-col", flags.label_col, "0-based label column, -1 = last");
    opts.clients = cmd->add_option("--clients", flags.clients, "number of clients K");
    opts.server_frac = cmd->add_option("--server-frac", flags.server_frac,
                                       "percent of rows reserved at the server (b)");
    opts.client_dthr = cmd->add_option("--client-dthr", flags.client_dthr, "client ECM Dthr");
    opts.server_dthr = cmd->add_option("--server-dthr", flags.server_dthr, "server ECM Dthr");
    opts.multiplier =
        cmd->add_option("--multiplier", flags.multiplier, "new-cluster threshold multiplier");
    opts.sigma = cmd->add_option("--sigma", flags.sigma, "PNN kernel smoothing parameter");
    opts.train_frac = cmd->add_option("--train-frac", flags.train_frac, "client train fraction");
    opts.seed = cmd->add_option("--seed", flags.seed, "master seed");
    opts.sharding = cmd->add_option("--sharding", flags.sharding,
                                    "client sharding: simple-random | stratified");
    return opts;
}

RunSpec resolve_run_spec(const RunFlags& flags, const RunOptionSet& opts) {
    RunSpec spec;
    if (!flags.config_path.empty()) {
        spec = load_run_spec(flags.config_path);
    }
    if (opts.input->count() > 0) {
        spec.input = flags.input;
    }
    if (opts.label_col->count() > 0) {
        spec.label_col = flags.label_col;
    }
    if (opts.clients->count() > 0) {
        spec.fed.num_clients = flags.clients;
    }
    if (opts.server_frac->count() > 0) {
        spec.fed.b_percent = flags.server_frac;
    }
    if (opts.client_dthr->count() > 0) {
        spec.fed.client_dthr = flags.client_dthr;
    }
    if (opts.server_dthr->count() > 0) {
        spec.fed.server_dthr = flags.server_dthr;
    }
    if (opts.multiplier->count() > 0) {
        spec.fed.multiplier = flags.multiplier;
    }
    if (opts.sigma->count() > 0) {
        spec.fed.sigma = flags.sigma;
    }
    if (opts.train_frac->count() > 0) {
        spec.fed.train_frac = flags.train_frac;
    }
    if (opts.seed->count() > 0) {
        spec.fed.seed = flags.seed;
    }
    if (opts.sharding->count() > 0) {
        spec.fed.client_sharding = sharding_from_string(flags.sharding);
    }
    spec.validate();
    return spec;
}

int cmd_run(const RunFlags& flags, const RunOptionSet& opts, const std::string& out_path) {
    const RunSpec spec = resolve_run_spec(flags, opts);
    const LabeledDataset ds = load_csv(spec.input, spec.label_col);
    const FederationReport report = run_one_shot(ds, spec.fed);
    const std::string text = format_report(report);
    std::cout << text;
    write_text_file(out_path, text);
    std::cout << "report written to " << out_path << "\n";
    return 0;
}

int cmd_sweep(const RunFlags& flags, const RunOptionSet& opts, const std::string& axis,
              double start, double stop, double step, const std::string& out_path,
              const std::string& plot_prefix) {
    const RunSpec run = resolve_run_spec(flags, opts);
    SweepSpec spec;
    spec.axis = sweep_axis_from_string(axis);
    spec.start = start;
    spec.stop = stop;
    spec.step = step;
    spec.base = run.fed;
    spec.validate();

    const LabeledDataset ds = load_csv(run.input, run.label_col);
    const auto rows = run_sweep(ds, spec);
    const std::string csv = sweep_rows_to_csv(rows);
    write_text_file(out_path, csv);
    std::cout << "sweep of " << to_string(spec.axis) << " over [" << format_double(spec.start)
              << ", " << format_double(spec.stop) << "] step " << format_double(spec.step) << ": "
              << rows.size() << " rows written to " << out_path << "\n";
    if (!plot_prefix.empty()) {
        write_sweep_plots(rows, spec, plot_prefix);
        std::cout << "plots written to " << plot_prefix << "_auc.svg and " << plot_prefix
                  << "_centers.svg\n";
    }
    return 0;
}

int cmd_eval_synth(const std::string& real_path, const std::string& synth_path, int label_col,
                   const std::string& out_path) {
    const LabeledDataset real = load_csv(real_path, label_col);
    const LabeledDataset synth = load_csv(synth_path, label_col);
    const QualityReport report = evaluate_quality(real, synth);
    const std::string text = format_quality_report(report, real_path, synth_path);
    std::cout << text;
    write_text_file(out_path, text);
    std::cout << "quality report written to " << out_path << "\n";
    return 0;
}

int cmd_partition(const std::string& input, int label_col, int clients, double server_frac,
                  std::uint64_t seed, const std::string& sharding, const std::string& out_dir) {
    const LabeledDataset ds = load_csv(input, label_col);
    const PartitionPlan plan =
        partition(ds, clients, server_frac, seed, sharding_from_string(sharding));

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    write_text_file(dir / "manifest.txt", format_partition_manifest(plan));
    write_csv(take_rows(ds, plan.server_rows), dir / "server.csv");
    std::cout << "server: " << plan.server_rows.size() << " rows\n";
    for (std::size_t k = 0; k < plan.client_rows.size(); ++k) {
        const std::string name = "client_" + std::to_string(k + 1) + ".csv";
        write_csv(take_rows(ds, plan.client_rows[k]), dir / name);
        std::cout << "client_" << (k + 1) << ": " << plan.client_rows[k].size() << " rows\n";
    }
    std::cout << "shards written to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-shot federated ECM+PNN classification simulator"};
    app.require_subcommand(1);

    RunFlags run_flags;
    std::string run_out = "fedpnn_report.txt";
    auto* run_cmd = app.add_subcommand("run", "run one one-shot federation experiment");
    run_cmd->add_option("--config", run_flags.config_path, "JSON config file");
    auto run_opts = add_federation_flags(run_cmd, run_flags);
    run_cmd->add_option("--out", run_out, "report file path");

    RunFlags sweep_flags;
    std::string sweep_axis;
    double sweep_start = 0.0, sweep_stop = 0.0, sweep_step = 0.0;
    std::string sweep_out = "sweep.csv";
    std::string sweep_plot;
    auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep of one parameter");
    sweep_cmd->add_option("--config", sweep_flags.config_path, "JSON config file");
    auto sweep_opts = add_federation_flags(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--sweep-axis", sweep_axis, "client-dthr | server-dthr | sigma")
        ->required();
    sweep_cmd->add_option("--sweep-start", sweep_start, "first grid value")->required();
    sweep_cmd->add_option("--sweep-stop", sweep_stop, "last grid value (inclusive)")->required();
    sweep_cmd->add_option("--sweep-step", sweep_step, "grid step")->required();
    sweep_cmd->add_option("--out", sweep_out, "sweep CSV path");
    sweep_cmd->add_option("--plot", sweep_plot, "SVG path prefix (optional)");

    std::string eval_real, eval_synth_path;
    int eval_label_col = -1;
    std::string eval_out = "quality_report.txt";
    auto* eval_cmd = app.add_subcommand("eval-synth", "score a synthetic CSV against a real one");
    eval_cmd->add_option("--input", eval_real, "real dataset CSV")->required();
    eval_cmd->add_option("--synth", eval_synth_path, "synthetic dataset CSV")->required();
    eval_cmd->add_option("--label-col", eval_label_col, "0-based label column, -1 = last");
    eval_cmd->add_option("--out", eval_out, "report file path");

    std::string part_input;
    int part_label_col = -1;
    int part_clients = 2;
    double part_server_frac = 10.0;
    std::uint64_t part_seed = 0;
    std::string part_sharding = "simple-random";
    std::string part_out = "shards";
    auto* part_cmd = app.add_subcommand("partition", "write server/client shards and a manifest");
    part_cmd->add_option("--input", part_input, "input CSV")->required();
    part_cmd->add_option("--label-col", part_label_col, "0-based label column, -1 = last");
    part_cmd->add_option("--clients", part_clients, "number of clients K");
    part_cmd->add_option("--server-frac", part_server_frac,
                         "percent of rows reserved at the server (b)");
    part_cmd->add_option("--seed", part_seed, "master seed");
    part_cmd->add_option("--sharding", part_sharding, "simple-random | stratified");
    part_cmd->add_option("--out", part_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(run_flags, run_opts, run_out);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(sweep_flags, sweep_opts, sweep_axis, sweep_start, sweep_stop,
                             sweep_step, sweep_out, sweep_plot);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval_synth(eval_real, eval_synth_path, eval_label_col, eval_out);
        }
        if (part_cmd->parsed()) {
            return cmd_partition(part_input, part_label_col, part_clients, part_server_frac,
                                 part_seed, part_sharding, part_out);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
