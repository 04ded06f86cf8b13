#pragma once

#include <string>
#include <vector>

namespace mollow::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f4e9c";
  bool dashed = false;
  bool markers = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<Series> series;
};

/// Static SVG line plot with axes, ticks and a legend. Non-finite points
/// (and non-positive ones on a log axis) break the polyline.
std::string render_svg(const Plot& plot);

}  // namespace mollow::cli
