#include "zyg/geometry.hpp"

#include <cmath>

#include "zyg/errors.hpp"

namespace zyg {

point3 zygmund_dilate(const point3& x, double s, double t) {
  if (!(s > 0.0) || !(t > 0.0))
    throw parameter_error("zygmund_dilate: dilation parameters must be positive");
  return {s * x[0], t * x[1], s * t * x[2]};
}

bool is_zygmund(const point3& sides, double tol) {
  for (double v : sides)
    if (!(v > 0.0)) throw geometry_error("is_zygmund: sides must be positive");
  return std::abs(sides[2] - sides[0] * sides[1]) <= tol * sides[2];
}

void require_zygmund(const ZygmundRectangle& r, double tol) {
  if (!is_zygmund(r.sides, tol))
    throw geometry_error("rectangle violates the Zygmund side constraint");
}

NodeRange node_range(const Grid3& grid, const ZygmundRectangle& r) {
  NodeRange nr;
  for (int a = 0; a < 3; ++a) {
    const double L = grid.extent(a);
    const double h = grid.spacing(a);
    if (!(r.sides[a] > 0.0))
      throw geometry_error("node_range: nonpositive side on axis " + std::to_string(a));
    if (r.sides[a] > L * (1.0 + 1e-12))
      throw geometry_error("node_range: side exceeds box on axis " + std::to_string(a));
    // First node with coordinate >= corner (mod L): origin + i*h >= corner.
    const double lo = (r.corner[a] - grid.origin()[a]) / h;
    const double hi = (r.corner[a] + r.sides[a] - grid.origin()[a]) / h;
    // Half-open [lo, hi) in index units; nudge to keep aligned edges exact.
    std::int64_t i0 = std::int64_t(std::ceil(lo - 1e-9));
    std::int64_t i1 = std::int64_t(std::ceil(hi - 1e-9));
    nr.first[a] = i0;
    nr.extent[a] = std::max<std::int64_t>(0, i1 - i0);
    if (nr.extent[a] > grid.count(a)) nr.extent[a] = grid.count(a);
  }
  return nr;
}

std::int64_t node_count(const Grid3& grid, const ZygmundRectangle& r) {
  auto nr = node_range(grid, r);
  return nr.extent[0] * nr.extent[1] * nr.extent[2];
}

ZygLattice build_lattice(const Grid3& grid, int j, int k, int N) {
  if (N < 0) throw parameter_error("build_lattice: refinement must be nonnegative");
  ZygLattice lat;
  lat.j = j;
  lat.k = k;
  lat.refinement = N;
  lat.cell_sides = {std::ldexp(1.0, j - N), std::ldexp(1.0, k - N),
                    std::ldexp(1.0, j + k - 2 * N)};
  for (int a = 0; a < 3; ++a) {
    const double L = grid.extent(a);
    const double side = lat.cell_sides[a];
    const double ratio = L / side;
    const double rounded = std::round(ratio);
    if (!(ratio > 0.0) || std::abs(ratio - rounded) > 1e-9 * ratio || rounded < 1.0)
      throw geometry_error("build_lattice: cell side does not divide box on axis " +
                           std::to_string(a));
    if (side < 2.0 * grid.spacing(a) * (1.0 - 1e-12))
      throw geometry_error("build_lattice: cell narrower than 2 grid cells on axis " +
                           std::to_string(a));
    lat.cells_per_axis[a] = std::int64_t(rounded);
  }
  lat.cells.reserve(lat.cells_per_axis[0] * lat.cells_per_axis[1] * lat.cells_per_axis[2]);
  for (std::int64_t a = 0; a < lat.cells_per_axis[0]; ++a)
    for (std::int64_t b = 0; b < lat.cells_per_axis[1]; ++b)
      for (std::int64_t c = 0; c < lat.cells_per_axis[2]; ++c) {
        ZygmundRectangle r;
        r.corner = {grid.origin()[0] + double(a) * lat.cell_sides[0],
                    grid.origin()[1] + double(b) * lat.cell_sides[1],
                    grid.origin()[2] + double(c) * lat.cell_sides[2]};
        r.sides = lat.cell_sides;
        lat.cells.push_back(r);
      }
  return lat;
}

bool ZygmundCone::contains(const point3& y, double s, double t) const {
  if (!(s > 0.0) || !(t > 0.0)) throw parameter_error("ZygmundCone: s,t must be positive");
  return std::abs(vertex[0] - y[0]) < s && std::abs(vertex[1] - y[1]) < s &&
         std::abs(vertex[2] - y[2]) < s * t;
}

ZygmundRectangle cone_section(const ZygmundCone& cone, double s, double t) {
  if (!(s > 0.0) || !(t > 0.0)) throw parameter_error("cone_section: s,t must be positive");
  ZygmundRectangle r;
  r.corner = {cone.vertex[0] - s, cone.vertex[1] - s, cone.vertex[2] - s * t};
  r.sides = {2.0 * s, 2.0 * s, 2.0 * s * t};
  return r;
}

}  // namespace zyg
