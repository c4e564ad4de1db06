#include "nhl_cli/contour.hpp"

#include <array>
#include <cstdint>
#include <map>

#include "nhl/errors.hpp"

namespace nhl::cli {

namespace {

struct Segment {
  std::int64_t a, b;  // edge ids
};

}  // namespace

std::vector<Polyline> zero_contours(const Grid& g) {
  if (g.nx < 2 || g.ny < 2) throw InvalidArgument("contour grid needs at least 2x2 nodes");
  if (g.z.size() != static_cast<std::size_t>(g.nx) * g.ny)
    throw InvalidArgument("contour grid size mismatch");

  const std::int64_t n_h = static_cast<std::int64_t>(g.nx - 1) * g.ny;
  // Horizontal edge (i,j)-(i+1,j) and vertical edge (i,j)-(i,j+1).
  auto h_id = [&](int i, int j) { return static_cast<std::int64_t>(j) * (g.nx - 1) + i; };
  auto v_id = [&](int i, int j) { return n_h + static_cast<std::int64_t>(j) * g.nx + i; };
  auto inside = [&](int i, int j) { return g.at(i, j) > 0.0; };

  auto crossing = [&](std::int64_t id) {
    int i0, j0, i1, j1;
    if (id < n_h) {
      i0 = static_cast<int>(id % (g.nx - 1));
      j0 = static_cast<int>(id / (g.nx - 1));
      i1 = i0 + 1;
      j1 = j0;
    } else {
      const std::int64_t r = id - n_h;
      i0 = static_cast<int>(r % g.nx);
      j0 = static_cast<int>(r / g.nx);
      i1 = i0;
      j1 = j0 + 1;
    }
    const double z0 = g.at(i0, j0), z1 = g.at(i1, j1);
    const double t = z0 / (z0 - z1);
    return Point{g.x(i0) + t * (g.x(i1) - g.x(i0)), g.y(j0) + t * (g.y(j1) - g.y(j0))};
  };

  std::vector<Segment> segs;
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const bool a = inside(i, j), b = inside(i + 1, j), c = inside(i + 1, j + 1),
                 d = inside(i, j + 1);
      const std::int64_t bottom = h_id(i, j), top = h_id(i, j + 1), left = v_id(i, j),
                         right = v_id(i + 1, j);
      std::array<std::int64_t, 4> cut{};
      int n = 0;
      if (a != b) cut[n++] = bottom;
      if (b != c) cut[n++] = right;
      if (d != c) cut[n++] = top;
      if (a != d) cut[n++] = left;
      if (n == 2) {
        segs.push_back({cut[0], cut[1]});
      } else if (n == 4) {
        const double centre = 0.25 * (g.at(i, j) + g.at(i + 1, j) + g.at(i + 1, j + 1) + g.at(i, j + 1));
        // Segments cut off the two corners that are not joined through the centre.
        const bool cut_bd = a ? centre > 0.0 : !(centre > 0.0);
        if (cut_bd) {
          segs.push_back({bottom, right});
          segs.push_back({top, left});
        } else {
          segs.push_back({left, bottom});
          segs.push_back({right, top});
        }
      }
    }
  }

  std::map<std::int64_t, std::vector<std::size_t>> by_edge;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    by_edge[segs[s].a].push_back(s);
    by_edge[segs[s].b].push_back(s);
  }
  std::vector<bool> used(segs.size(), false);

  auto walk = [&](std::size_t s0, std::int64_t start) {
    Polyline line{crossing(start)};
    std::int64_t at = start;
    std::size_t s = s0;
    while (true) {
      used[s] = true;
      at = segs[s].a == at ? segs[s].b : segs[s].a;
      line.push_back(crossing(at));
      std::size_t next = segs.size();
      for (std::size_t t : by_edge[at])
        if (!used[t]) next = t;
      if (next == segs.size()) break;
      s = next;
    }
    return line;
  };

  std::vector<Polyline> out;
  // Open chains start at an edge touched by a single segment (grid border).
  for (const auto& [edge, list] : by_edge)
    if (list.size() == 1 && !used[list[0]]) out.push_back(walk(list[0], edge));
  for (std::size_t s = 0; s < segs.size(); ++s)
    if (!used[s]) out.push_back(walk(s, segs[s].a));
  return out;
}

}  // namespace nhl::cli
