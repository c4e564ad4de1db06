#pragma once

#include <string>
#include <vector>

#include "nhl_cli/contour.hpp"

namespace nhl::cli {

struct Series {
  std::string label;
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  bool markers = false;  // circles instead of a polyline
};

struct PlotStyle {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  int width = 640;
  int height = 480;
};

// Standalone SVG 1.1 line plot with axes, ticks and a legend. Throws
// InvalidArgument on no series, an empty series or non-finite data.
std::string render_line_plot(const std::vector<Series>& series, const PlotStyle& style);

// One rect per grid node (cells centred on the nodes), coloured by the sign
// of z: positive red, negative blue, zero white. Overlays are drawn on top.
std::string render_heatmap(const Grid& grid, const std::vector<Series>& overlays,
                           const PlotStyle& style);

}  // namespace nhl::cli
