// svgplot.hpp - minimal vector plots for the report files
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace snspdcli {

struct PlotSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  std::string label;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false; // log10 of max(y, floor) with a decade floor
  std::vector<PlotSeries> series;
};

// Writes a self-contained SVG with axes, tick labels and polylines.
void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec);

} // namespace snspdcli
