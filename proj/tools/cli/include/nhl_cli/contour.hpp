#pragma once

#include <vector>

namespace nhl::cli {

// Node values z(i, j) = z[j * nx + i] on x_i = x0 + i (x1 - x0)/(nx - 1),
// y_j = y0 + j (y1 - y0)/(ny - 1).
struct Grid {
  double x0, x1, y0, y1;
  int nx, ny;
  std::vector<double> z;

  double x(int i) const { return x0 + (x1 - x0) * i / (nx - 1); }
  double y(int j) const { return y0 + (y1 - y0) * j / (ny - 1); }
  double at(int i, int j) const { return z[static_cast<std::size_t>(j) * nx + i]; }
};

struct Point {
  double x, y;
};
using Polyline = std::vector<Point>;

// Zero level set by marching squares. A node counts as inside when z > 0;
// crossings are placed by linear interpolation along cell edges, saddles are
// resolved by the cell-centre average. Open chains come first, then closed
// loops (first point repeated at the end); order is deterministic.
std::vector<Polyline> zero_contours(const Grid& g);

}  // namespace nhl::cli
