#ifndef FEDPNN_SVG_PLOT_HPP
#define FEDPNN_SVG_PLOT_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace fedpnn {

/// One polyline on a chart.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal static line chart writer (axes, ticks, legend). Deterministic
/// output; enough for sweep curves, not a general plotting layer.
void write_line_chart_svg(const std::filesystem::path& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series);

} // namespace fedpnn

#endif
