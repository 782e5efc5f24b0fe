#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lapbel {

// One error curve on the log-log convergence plot.
struct PlotSeries {
  std::string label;
  std::vector<double> h;
  std::vector<double> err; // entries <= 0 are skipped (saturated / inapplicable)
};

// Dashed reference line err = C h^order, anchored to the coarsest data point.
struct GuideLine {
  double order = 1.0;
  std::string label;
};

// Self-contained SVG writer: log-log axes with decade ticks, one polyline
// per series, dashed guide slopes, legend.  No plotting dependency.
void write_loglog_svg(const std::filesystem::path& path, const std::string& title,
                      const std::vector<PlotSeries>& series,
                      const std::vector<GuideLine>& guides);

} // namespace lapbel
