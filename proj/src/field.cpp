#include "zyg/field.hpp"

#include <algorithm>
#include <cmath>

#include "zyg/errors.hpp"

namespace zyg {

ScalarField3::ScalarField3(Grid3 grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (std::int64_t(values_.size()) != grid_.size())
    throw dimension_error("ScalarField3: value count does not match grid");
}

ScalarField3 ScalarField3::zeros(const Grid3& grid) {
  return ScalarField3(grid, std::vector<double>(grid.size(), 0.0));
}

ScalarField3 ScalarField3::constant(const Grid3& grid, double c) {
  return ScalarField3(grid, std::vector<double>(grid.size(), c));
}

ScalarField3 ScalarField3::sample(const Grid3& grid,
                                  const std::function<double(point3)>& fn) {
  std::vector<double> v(grid.size());
  const auto n = grid.counts();
#pragma omp parallel for collapse(2) schedule(static)
  for (std::int64_t i1 = 0; i1 < n[0]; ++i1)
    for (std::int64_t i2 = 0; i2 < n[1]; ++i2) {
      std::int64_t base = grid.flat(i1, i2, 0);
      for (std::int64_t i3 = 0; i3 < n[2]; ++i3)
        v[base + i3] = fn(grid.node({i1, i2, i3}));
    }
  return ScalarField3(grid, std::move(v));
}

ScalarField3 ScalarField3::delta(const Grid3& grid, index3 at) {
  std::vector<double> v(grid.size(), 0.0);
  v[grid.flat_wrapped(at[0], at[1], at[2])] = 1.0 / grid.cell_volume();
  return ScalarField3(grid, std::move(v));
}

bool ScalarField3::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

double ScalarField3::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField3::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField3::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

ScalarField3 ScalarField3::map(const std::function<double(double)>& fn) const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) v[i] = fn(values_[i]);
  return ScalarField3(grid_, std::move(v));
}

ScalarField3 ScalarField3::binary(const ScalarField3& other,
                                  const std::function<double(double, double)>& fn) const {
  if (grid_ != other.grid_) throw dimension_error("ScalarField3: grid mismatch");
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) v[i] = fn(values_[i], other.values_[i]);
  return ScalarField3(grid_, std::move(v));
}

ScalarField3 ScalarField3::operator+(const ScalarField3& o) const {
  return binary(o, [](double a, double b) { return a + b; });
}
ScalarField3 ScalarField3::operator-(const ScalarField3& o) const {
  return binary(o, [](double a, double b) { return a - b; });
}
ScalarField3 ScalarField3::operator*(const ScalarField3& o) const {
  return binary(o, [](double a, double b) { return a * b; });
}
ScalarField3 ScalarField3::operator*(double c) const {
  return map([c](double a) { return a * c; });
}
ScalarField3 ScalarField3::abs() const {
  return map([](double a) { return std::abs(a); });
}

SpectralField3::SpectralField3(Grid3 grid, std::vector<cplx> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (std::int64_t(coeffs_.size()) != grid_.size())
    throw dimension_error("SpectralField3: coeff count does not match grid");
}

}  // namespace zyg
