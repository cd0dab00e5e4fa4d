#ifndef FEDPNN_EXPERIMENT_HPP
#define FEDPNN_EXPERIMENT_HPP

#include "fedpnn/federation.hpp"
#include "fedpnn/types.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace fedpnn {

/// A run request: input file plus federation parameters.
struct RunSpec {
    std::string input;
    int label_col = -1;
    FederationConfig fed;

    void validate() const;
};

/// Parses the JSON config file for `run`. Unknown keys are rejected; every
/// field except "input" has a default.
RunSpec run_spec_from_json(const std::string& text);
RunSpec load_run_spec(const std::filesystem::path& path);
std::string run_spec_to_json(const RunSpec& spec);

enum class SweepAxis { kClientDthr, kServerDthr, kSigma };

SweepAxis sweep_axis_from_string(const std::string& name);
std::string to_string(SweepAxis axis);

/// Grid sweep of one parameter; everything else stays fixed at `base`.
struct SweepSpec {
    SweepAxis axis = SweepAxis::kClientDthr;
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    FederationConfig base;

    void validate() const;
};

/// start, start + step, ...; floor((stop - start) / step) + 1 values.
std::vector<double> sweep_grid(const SweepSpec& spec);

/// One CSV row: a grid value and one node's outcome. Client rows carry
/// local-phase center counts, the server row carries meta center counts and
/// no local AUC.
struct SweepRow {
    double axis_value = 0.0;
    std::string node;
    bool has_local_auc = false;
    double local_auc = 0.0;
    double global_auc = 0.0;
    std::array<std::int64_t, 2> centers{0, 0};
};

std::vector<SweepRow> run_sweep(const LabeledDataset& ds, const SweepSpec& spec);

/// Header: axis_value,node,local_auc,global_auc,neg_centers,pos_centers
std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows);

/// Renders the two sweep charts (AUC per node, center counts) as static SVG
/// files <prefix>_auc.svg and <prefix>_centers.svg.
void write_sweep_plots(const std::vector<SweepRow>& rows, const SweepSpec& spec,
                       const std::filesystem::path& prefix);

} // namespace fedpnn

#endif
