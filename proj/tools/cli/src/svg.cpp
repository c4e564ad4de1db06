#include "nhl_cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nhl/errors.hpp"

namespace nhl::cli {

namespace {

constexpr double kMarginLeft = 70, kMarginRight = 20, kMarginTop = 40, kMarginBottom = 55;

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(v);
  return t;
}

struct Frame {
  double x0, x1, y0, y1;
  double w, h;

  double sx(double x) const { return kMarginLeft + (x - x0) / (x1 - x0) * (w - kMarginLeft - kMarginRight); }
  double sy(double y) const { return h - kMarginBottom - (y - y0) / (y1 - y0) * (h - kMarginTop - kMarginBottom); }
};

void pad_range(double& lo, double& hi) {
  if (hi > lo) return;
  const double d = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
  lo -= d;
  hi += d;
}

std::string open_svg(const PlotStyle& style) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
       std::to_string(style.width) + "\" height=\"" + std::to_string(style.height) +
       "\" viewBox=\"0 0 " + std::to_string(style.width) + " " + std::to_string(style.height) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(style.width) + "\" height=\"" +
       std::to_string(style.height) + "\" fill=\"white\"/>\n";
  return s;
}

std::string axes(const Frame& f, const PlotStyle& style) {
  std::string s;
  const double left = kMarginLeft, right = f.w - kMarginRight, top = kMarginTop,
               bottom = f.h - kMarginBottom;
  s += "<g stroke=\"black\" fill=\"none\">\n";
  s += "<rect x=\"" + px(left) + "\" y=\"" + px(top) + "\" width=\"" + px(right - left) +
       "\" height=\"" + px(bottom - top) + "\"/>\n";
  for (double t : nice_ticks(f.x0, f.x1))
    s += "<line x1=\"" + px(f.sx(t)) + "\" y1=\"" + px(bottom) + "\" x2=\"" + px(f.sx(t)) +
         "\" y2=\"" + px(bottom + 5) + "\"/>\n";
  for (double t : nice_ticks(f.y0, f.y1))
    s += "<line x1=\"" + px(left - 5) + "\" y1=\"" + px(f.sy(t)) + "\" x2=\"" + px(left) +
         "\" y2=\"" + px(f.sy(t)) + "\"/>\n";
  s += "</g>\n<g fill=\"black\">\n";
  for (double t : nice_ticks(f.x0, f.x1))
    s += "<text x=\"" + px(f.sx(t)) + "\" y=\"" + px(bottom + 18) + "\" text-anchor=\"middle\">" +
         tick_label(t) + "</text>\n";
  for (double t : nice_ticks(f.y0, f.y1))
    s += "<text x=\"" + px(left - 8) + "\" y=\"" + px(f.sy(t) + 4) + "\" text-anchor=\"end\">" +
         tick_label(t) + "</text>\n";
  s += "<text x=\"" + px(0.5 * (left + right)) + "\" y=\"" + px(f.h - 12) +
       "\" text-anchor=\"middle\">" + escape(style.xlabel) + "</text>\n";
  s += "<text x=\"16\" y=\"" + px(0.5 * (top + bottom)) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       px(0.5 * (top + bottom)) + ")\">" + escape(style.ylabel) + "</text>\n";
  s += "<text x=\"" + px(0.5 * f.w) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
       escape(style.title) + "</text>\n";
  s += "</g>\n";
  return s;
}

void check_series(const Series& s) {
  if (s.x.empty() || s.x.size() != s.y.size())
    throw InvalidArgument("plot series '" + s.label + "' is empty or has mismatched x/y");
  for (std::size_t i = 0; i < s.x.size(); ++i)
    if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
      throw InvalidArgument("plot series '" + s.label + "' contains non-finite data");
}

std::string draw_series(const Frame& f, const std::vector<Series>& series) {
  std::string s;
  for (const auto& ser : series) {
    if (ser.markers) {
      s += "<g fill=\"" + ser.color + "\">\n";
      for (std::size_t i = 0; i < ser.x.size(); ++i)
        s += "<circle cx=\"" + px(f.sx(ser.x[i])) + "\" cy=\"" + px(f.sy(ser.y[i])) + "\" r=\"2.5\"/>\n";
      s += "</g>\n";
    } else {
      s += "<polyline fill=\"none\" stroke=\"" + ser.color + "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < ser.x.size(); ++i) {
        if (i) s += ' ';
        s += px(f.sx(ser.x[i])) + "," + px(f.sy(ser.y[i]));
      }
      s += "\"/>\n";
    }
  }
  return s;
}

std::string legend(const Frame& f, const std::vector<Series>& series) {
  std::string s;
  double y = kMarginTop + 14;
  const double x = f.w - kMarginRight - 150;
  for (const auto& ser : series) {
    if (ser.label.empty()) continue;
    s += "<rect x=\"" + px(x) + "\" y=\"" + px(y - 8) + "\" width=\"12\" height=\"8\" fill=\"" +
         ser.color + "\"/>\n";
    s += "<text x=\"" + px(x + 18) + "\" y=\"" + px(y) + "\">" + escape(ser.label) + "</text>\n";
    y += 16;
  }
  return s;
}

}  // namespace

std::string render_line_plot(const std::vector<Series>& series, const PlotStyle& style) {
  if (series.empty()) throw InvalidArgument("line plot needs at least one series");
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    check_series(s);
    x0 = std::min(x0, *std::min_element(s.x.begin(), s.x.end()));
    x1 = std::max(x1, *std::max_element(s.x.begin(), s.x.end()));
    y0 = std::min(y0, *std::min_element(s.y.begin(), s.y.end()));
    y1 = std::max(y1, *std::max_element(s.y.begin(), s.y.end()));
  }
  pad_range(x0, x1);
  pad_range(y0, y1);
  const Frame f{x0, x1, y0, y1, static_cast<double>(style.width), static_cast<double>(style.height)};
  std::string s = open_svg(style);
  s += axes(f, style);
  s += draw_series(f, series);
  s += legend(f, series);
  s += "</svg>\n";
  return s;
}

std::string render_heatmap(const Grid& grid, const std::vector<Series>& overlays,
                           const PlotStyle& style) {
  if (grid.nx < 2 || grid.ny < 2 || grid.z.size() != static_cast<std::size_t>(grid.nx) * grid.ny)
    throw InvalidArgument("heatmap grid must be at least 2x2 and match its size");
  for (double v : grid.z)
    if (!std::isfinite(v)) throw InvalidArgument("heatmap contains non-finite data");
  for (const auto& o : overlays) check_series(o);

  const double hx = (grid.x1 - grid.x0) / (grid.nx - 1), hy = (grid.y1 - grid.y0) / (grid.ny - 1);
  const Frame f{grid.x0 - 0.5 * hx, grid.x1 + 0.5 * hx, grid.y0 - 0.5 * hy, grid.y1 + 0.5 * hy,
                static_cast<double>(style.width), static_cast<double>(style.height)};
  std::string s = open_svg(style);
  s += "<g stroke=\"none\">\n";
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const double v = grid.at(i, j);
      const char* color = v > 0.0 ? "#f4a582" : (v < 0.0 ? "#92c5de" : "#ffffff");
      const double xa = f.sx(grid.x(i) - 0.5 * hx), xb = f.sx(grid.x(i) + 0.5 * hx);
      const double ya = f.sy(grid.y(j) + 0.5 * hy), yb = f.sy(grid.y(j) - 0.5 * hy);
      s += "<rect x=\"" + px(xa) + "\" y=\"" + px(ya) + "\" width=\"" + px(xb - xa) +
           "\" height=\"" + px(yb - ya) + "\" fill=\"" + color + "\"/>\n";
    }
  }
  s += "</g>\n";
  s += axes(f, style);
  s += draw_series(f, overlays);
  s += legend(f, overlays);
  s += "</svg>\n";
  return s;
}

}  // namespace nhl::cli
