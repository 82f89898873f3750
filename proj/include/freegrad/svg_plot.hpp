#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace freegrad {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
};

// Self-contained log-log SVG: one polyline per series, a legend and tick
// labels at powers of 10. Points with nonpositive or non-finite values are
// skipped with a warning on stderr. Returns the number of plotted points.
std::size_t write_loglog_svg(const std::filesystem::path& path,
                             const PlotSpec& spec,
                             std::span<const Series> series);

}  // namespace freegrad
