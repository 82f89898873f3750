#include "freegrad/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "freegrad/errors.hpp"

namespace freegrad {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 30.0;
constexpr double kTop = 42.0;
constexpr double kBottom = 52.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

bool plottable(double v) { return std::isfinite(v) && v > 0.0; }

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string tick_label(int exponent) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "1e%d", exponent);
  return buf;
}

}  // namespace

std::size_t write_loglog_svg(const std::filesystem::path& path,
                             const PlotSpec& spec,
                             std::span<const Series> series) {
  if (series.empty())
    throw InvalidArgument("write_loglog_svg: need at least one series");

  double min_lx = std::numeric_limits<double>::infinity();
  double max_lx = -std::numeric_limits<double>::infinity();
  double min_ly = std::numeric_limits<double>::infinity();
  double max_ly = -std::numeric_limits<double>::infinity();
  std::size_t plotted = 0;
  std::size_t skipped = 0;

  for (const Series& s : series) {
    if (s.x.size() != s.y.size())
      throw InvalidArgument("write_loglog_svg: x/y length mismatch in series " +
                            s.label);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!plottable(s.x[i]) || !plottable(s.y[i])) {
        ++skipped;
        continue;
      }
      ++plotted;
      min_lx = std::min(min_lx, std::log10(s.x[i]));
      max_lx = std::max(max_lx, std::log10(s.x[i]));
      min_ly = std::min(min_ly, std::log10(s.y[i]));
      max_ly = std::max(max_ly, std::log10(s.y[i]));
    }
  }
  if (skipped > 0)
    std::fprintf(stderr,
                 "svg_plot: skipped %zu point(s) not representable on a "
                 "log-log axis (%s)\n",
                 skipped, spec.title.c_str());
  if (plotted == 0)
    throw InvalidArgument("write_loglog_svg: no plottable points");

  // Degenerate spans still deserve a visible frame.
  if (max_lx - min_lx < 1e-12) {
    min_lx -= 0.5;
    max_lx += 0.5;
  }
  if (max_ly - min_ly < 1e-12) {
    min_ly -= 0.5;
    max_ly += 0.5;
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double lx) {
    return kLeft + (lx - min_lx) / (max_lx - min_lx) * plot_w;
  };
  auto py = [&](double ly) {
    return kTop + (max_ly - ly) / (max_ly - min_ly) * plot_h;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
         "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) +
         " " + fmt(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" +
         spec.title + "</text>\n";

  // Frame.
  svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" +
         fmt(plot_w) + "\" height=\"" + fmt(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  // Ticks at integer powers of ten.
  auto emit_ticks = [&](double lo, double hi, bool x_axis) {
    const int first = static_cast<int>(std::ceil(lo - 1e-9));
    const int last = static_cast<int>(std::floor(hi + 1e-9));
    const int count = last - first + 1;
    const int stride = count > 10 ? (count + 9) / 10 : 1;
    for (int e = first; e <= last; e += stride) {
      if (x_axis) {
        const double x = px(static_cast<double>(e));
        svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(kTop + plot_h) +
               "\" x2=\"" + fmt(x) + "\" y2=\"" + fmt(kTop + plot_h + 6) +
               "\" stroke=\"black\"/>\n";
        svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" +
               fmt(x) + "\" y2=\"" + fmt(kTop + plot_h) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(kTop + plot_h + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"12\">" +
               tick_label(e) + "</text>\n";
      } else {
        const double y = py(static_cast<double>(e));
        svg += "<line x1=\"" + fmt(kLeft - 6) + "\" y1=\"" + fmt(y) +
               "\" x2=\"" + fmt(kLeft) + "\" y2=\"" + fmt(y) +
               "\" stroke=\"black\"/>\n";
        svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(y) + "\" x2=\"" +
               fmt(kLeft + plot_w) + "\" y2=\"" + fmt(y) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + fmt(kLeft - 10) + "\" y=\"" + fmt(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"12\">" +
               tick_label(e) + "</text>\n";
      }
    }
  };
  emit_ticks(min_lx, max_lx, true);
  emit_ticks(min_ly, max_ly, false);

  // Axis labels.
  svg += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" +
         fmt(kHeight - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">" +
         spec.x_label + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt(kTop + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 " +
         fmt(kTop + plot_h / 2) + ")\">" + spec.y_label + "</text>\n";

  // Polylines, broken where points were skipped.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(*kPalette))];
    std::string points;
    std::size_t run = 0;
    auto flush = [&]() {
      if (run == 1) {
        // Render isolated points as small circles so they stay visible.
        svg += "<circle cx=\"" + points.substr(0, points.find(',')) +
               "\" cy=\"" +
               points.substr(points.find(',') + 1,
                             points.find(' ') - points.find(',') - 1) +
               "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
      } else if (run > 1) {
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
      }
      points.clear();
      run = 0;
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!plottable(s.x[i]) || !plottable(s.y[i])) {
        flush();
        continue;
      }
      points += fmt(px(std::log10(s.x[i]))) + "," +
                fmt(py(std::log10(s.y[i]))) + " ";
      ++run;
    }
    flush();

    // Legend entry.
    const double ly = kTop + 16.0 + 18.0 * static_cast<double>(si);
    const double lx = kLeft + plot_w - 170.0;
    svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
           fmt(lx + 26) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(lx + 32) + "\" y=\"" + fmt(ly) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label +
           "</text>\n";
  }

  svg += "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_loglog_svg: cannot open " + path.string());
  out << svg;
  out.flush();
  if (!out)
    throw IoError("write_loglog_svg: write failed for " + path.string());
  return plotted;
}

}  // namespace freegrad
