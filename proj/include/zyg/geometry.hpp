#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zyg/grid.hpp"

namespace zyg {

// The two-parameter scaling (x1,x2,x3) -> (s x1, t x2, s t x3).
point3 zygmund_dilate(const point3& x, double s, double t);

// Axis-parallel box [corner, corner+sides) whose third side is tied to the
// product of the first two. Corners are canonicalized mod box sides by the
// grid routines; the rectangle itself is a plain value type.
struct ZygmundRectangle {
  point3 corner{0.0, 0.0, 0.0};
  point3 sides{1.0, 1.0, 1.0};

  double volume() const { return sides[0] * sides[1] * sides[2]; }
  ZygmundRectangle dilated(double s, double t) const {
    return {zygmund_dilate(corner, s, t), zygmund_dilate(sides, s, t)};
  }
};

// |lS - lI*lJ| <= tol * lS, the defining constraint.
bool is_zygmund(const point3& sides, double tol = 1e-10);

void require_zygmund(const ZygmundRectangle& r, double tol = 1e-10);

// Node indices covered by a rectangle on a grid, with wrap-around. A node
// belongs to [a, a+l) iff its coordinate reduced mod L falls inside; sides
// must not exceed the box.
struct NodeRange {
  index3 first;   // index of the first covered node per axis
  index3 extent;  // number of covered nodes per axis (contiguous mod n)
};
NodeRange node_range(const Grid3& grid, const ZygmundRectangle& r);
std::int64_t node_count(const Grid3& grid, const ZygmundRectangle& r);

// Visits every covered node (wrapped); f receives the flat index.
template <class F>
void for_each_node(const Grid3& grid, const NodeRange& nr, F&& f) {
  for (std::int64_t a = 0; a < nr.extent[0]; ++a)
    for (std::int64_t b = 0; b < nr.extent[1]; ++b)
      for (std::int64_t c = 0; c < nr.extent[2]; ++c)
        f(grid.flat_wrapped(nr.first[0] + a, nr.first[1] + b, nr.first[2] + c));
}

enum class SamplePolicy { lower_left, center, random_fixed };

// Complete tiling of the periodic box by dyadic Zygmund rectangles with
// |I| = 2^(j-N), |J| = 2^(k-N), |S| = 2^(j+k-2N).
struct ZygLattice {
  int j = 0;
  int k = 0;
  int refinement = 0;  // N
  point3 cell_sides{1.0, 1.0, 1.0};
  index3 cells_per_axis{1, 1, 1};
  std::vector<ZygmundRectangle> cells;
};

ZygLattice build_lattice(const Grid3& grid, int j, int k, int N);

// Region {(y,s,t): |x1-y1|<s, |x2-y2|<s, |x3-y3|<s t}.
struct ZygmundCone {
  point3 vertex{0.0, 0.0, 0.0};
  bool contains(const point3& y, double s, double t) const;
};

// Slice of the cone at fixed (s,t): sides (2s, 2s, 2st). Note these sides
// give lS = lI*lJ/2, so the slice is returned as a plain box; callers can ask
// is_zygmund about it and get the honest answer.
ZygmundRectangle cone_section(const ZygmundCone& cone, double s, double t);

}  // namespace zyg
