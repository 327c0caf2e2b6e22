#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "zyg/errors.hpp"

namespace zyg {

using index3 = std::array<std::int64_t, 3>;
using point3 = std::array<double, 3>;

inline bool is_pow2(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

// Periodic box [o, o+L) per axis, sampled at n nodes per axis.
// Node (i1,i2,i3) sits at origin + (i1*h1, i2*h2, i3*h3) and represents the
// cell [x - h/2, x + h/2); all quadrature is the midpoint rule on these cells.
class Grid3 {
 public:
  Grid3(point3 extents, index3 counts, point3 origin = {0.0, 0.0, 0.0})
      : extents_(extents), counts_(counts), origin_(origin) {
    for (int a = 0; a < 3; ++a) {
      if (!(extents_[a] > 0.0))
        throw geometry_error("Grid3: extent must be positive on axis " + std::to_string(a));
      if (!is_pow2(counts_[a]))
        throw geometry_error("Grid3: sample count must be a power of two on axis " +
                             std::to_string(a));
    }
  }

  static Grid3 cubic(double L, std::int64_t n, double origin = 0.0) {
    return Grid3({L, L, L}, {n, n, n}, {origin, origin, origin});
  }
  // Nodes at cell centers of a [0,L)^3 box; rectangle edges on multiples of h
  // then bisect no cell.
  static Grid3 cell_centered(point3 extents, index3 counts) {
    point3 o;
    for (int a = 0; a < 3; ++a) o[a] = 0.5 * extents[a] / double(counts[a]);
    return Grid3(extents, counts, o);
  }
  // Nodes at 0, h, ..., with coordinates read in [-L/2, L/2): the layout used
  // for convolution kernels.
  static Grid3 kernel_centered(point3 extents, index3 counts) {
    return Grid3(extents, counts, {0.0, 0.0, 0.0});
  }

  const point3& extents() const { return extents_; }
  const index3& counts() const { return counts_; }
  const point3& origin() const { return origin_; }

  double extent(int a) const { return extents_[a]; }
  std::int64_t count(int a) const { return counts_[a]; }
  double spacing(int a) const { return extents_[a] / double(counts_[a]); }
  point3 spacing() const { return {spacing(0), spacing(1), spacing(2)}; }

  std::int64_t size() const { return counts_[0] * counts_[1] * counts_[2]; }
  double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }
  double box_volume() const { return extents_[0] * extents_[1] * extents_[2]; }

  std::int64_t flat(std::int64_t i1, std::int64_t i2, std::int64_t i3) const {
    return (i1 * counts_[1] + i2) * counts_[2] + i3;
  }
  std::int64_t flat_wrapped(std::int64_t i1, std::int64_t i2, std::int64_t i3) const {
    return flat(mod(i1, counts_[0]), mod(i2, counts_[1]), mod(i3, counts_[2]));
  }
  index3 unflat(std::int64_t f) const {
    index3 i;
    i[2] = f % counts_[2];
    f /= counts_[2];
    i[1] = f % counts_[1];
    i[0] = f / counts_[1];
    return i;
  }

  double coord(int a, std::int64_t i) const { return origin_[a] + double(i) * spacing(a); }
  point3 node(index3 i) const { return {coord(0, i[0]), coord(1, i[1]), coord(2, i[2])}; }

  // Coordinate reduced to the centered fundamental domain [-L/2, L/2).
  double centered_coord(int a, std::int64_t i) const {
    double x = coord(a, i);
    double L = extents_[a];
    x = std::fmod(x + 0.5 * L, L);
    if (x < 0.0) x += L;
    return x - 0.5 * L;
  }

  // Integer frequency of FFT bin m on axis a, in [-n/2, n/2).
  std::int64_t freq_index(int a, std::int64_t m) const {
    if (counts_[a] == 1) return 0;
    return (m < counts_[a] / 2) ? m : m - counts_[a];
  }
  // Physical frequency (cycles per unit length) of bin m.
  double freq(int a, std::int64_t m) const { return double(freq_index(a, m)) / extents_[a]; }

  bool operator==(const Grid3& o) const {
    return extents_ == o.extents_ && counts_ == o.counts_ && origin_ == o.origin_;
  }
  bool operator!=(const Grid3& o) const { return !(*this == o); }
  bool same_layout(const Grid3& o) const {
    return extents_ == o.extents_ && counts_ == o.counts_;
  }

  static std::int64_t mod(std::int64_t v, std::int64_t n) {
    std::int64_t r = v % n;
    return r < 0 ? r + n : r;
  }

 private:
  point3 extents_;
  index3 counts_;
  point3 origin_;
};

}  // namespace zyg
