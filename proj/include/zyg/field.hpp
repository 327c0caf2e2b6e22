#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "zyg/grid.hpp"

namespace zyg {

using cplx = std::complex<double>;

// Real samples of a function on a periodic grid. Fields are immutable after
// construction; every operation returns a new field.
class ScalarField3 {
 public:
  ScalarField3(Grid3 grid, std::vector<double> values);
  static ScalarField3 zeros(const Grid3& grid);
  static ScalarField3 constant(const Grid3& grid, double c);
  // Samples fn at every node.
  static ScalarField3 sample(const Grid3& grid, const std::function<double(point3)>& fn);
  // Mass-one discrete delta: value 1/cellvol at one node, 0 elsewhere.
  static ScalarField3 delta(const Grid3& grid, index3 at);

  const Grid3& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::int64_t f) const { return values_[f]; }
  double at(index3 i) const { return values_[grid_.flat(i[0], i[1], i[2])]; }
  std::int64_t size() const { return grid_.size(); }

  bool all_finite() const;
  double min() const;
  double max() const;
  double max_abs() const;

  ScalarField3 map(const std::function<double(double)>& fn) const;
  ScalarField3 binary(const ScalarField3& other,
                      const std::function<double(double, double)>& fn) const;

  ScalarField3 operator+(const ScalarField3& o) const;
  ScalarField3 operator-(const ScalarField3& o) const;
  ScalarField3 operator*(const ScalarField3& o) const;  // pointwise
  ScalarField3 operator*(double c) const;
  ScalarField3 abs() const;

 private:
  Grid3 grid_;
  std::vector<double> values_;
};

inline ScalarField3 operator*(double c, const ScalarField3& f) { return f * c; }

// Complex Fourier coefficients on the dual grid. coeff(m) approximates the
// continuous transform f^(xi_m) = integral of f(x) exp(-2 pi i xi_m . x) dx at
// xi_m = (m1/L1, m2/L2, m3/L3), up to the origin phase (irrelevant for
// translation-invariant multipliers).
class SpectralField3 {
 public:
  SpectralField3(Grid3 grid, std::vector<cplx> coeffs);

  const Grid3& grid() const { return grid_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx operator[](std::int64_t f) const { return coeffs_[f]; }

 private:
  Grid3 grid_;
  std::vector<cplx> coeffs_;
};

}  // namespace zyg
