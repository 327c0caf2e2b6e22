#include "zyg/field_ops.hpp"

#include <cmath>

#include "zyg/errors.hpp"
#include "zyg/fft.hpp"

namespace zyg {

ScalarField3 fft_convolve(const ScalarField3& f, const ScalarField3& g) {
  if (f.grid() != g.grid()) throw dimension_error("fft_convolve: grid mismatch");
  if (!f.all_finite() || !g.all_finite())
    throw data_error("fft_convolve: non-finite input sample");
  auto F = fft::forward_real(f.grid(), f.values());
  auto G = fft::forward_real(f.grid(), g.values());
  const double cv = f.grid().cell_volume();
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= G[i] * cv;
  return ScalarField3(f.grid(), fft::inverse_to_real(f.grid(), F));
}

double lp_norm(const ScalarField3& f, double p, const std::optional<ScalarField3>& w) {
  if (!(p >= 1.0)) throw parameter_error("lp_norm: p must be >= 1");
  if (w) {
    if (w->grid() != f.grid()) throw dimension_error("lp_norm: weight grid mismatch");
    if (w->min() <= 0.0) throw weight_error("lp_norm: weight must be strictly positive");
  }
  const double cv = f.grid().cell_volume();
  double acc = 0.0;
  const auto& v = f.values();
  if (w) {
    const auto& wv = w->values();
    for (std::size_t i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]), p) * wv[i];
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]), p);
  }
  return std::pow(acc * cv, 1.0 / p);
}

double l2_norm(const ScalarField3& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v * v;
  return std::sqrt(acc * f.grid().cell_volume());
}

double inner(const ScalarField3& f, const ScalarField3& g) {
  if (f.grid() != g.grid()) throw dimension_error("inner: grid mismatch");
  double acc = 0.0;
  const auto& a = f.values();
  const auto& b = g.values();
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc * f.grid().cell_volume();
}

double integrate(const ScalarField3& f, const std::optional<ZygmundRectangle>& region) {
  const double cv = f.grid().cell_volume();
  if (!region) {
    double acc = 0.0;
    for (double v : f.values()) acc += v;
    return acc * cv;
  }
  auto nr = node_range(f.grid(), *region);
  double acc = 0.0;
  for_each_node(f.grid(), nr, [&](std::int64_t idx) { acc += f[idx]; });
  return acc * cv;
}

double mean(const ScalarField3& f, const ZygmundRectangle& region) {
  auto nr = node_range(f.grid(), region);
  const std::int64_t cnt = nr.extent[0] * nr.extent[1] * nr.extent[2];
  if (cnt == 0) throw geometry_error("mean: region covers no grid node");
  double acc = 0.0;
  for_each_node(f.grid(), nr, [&](std::int64_t idx) { acc += f[idx]; });
  return acc / double(cnt);
}

SpectralField3 analyze(const ScalarField3& f) {
  auto c = fft::forward_real(f.grid(), f.values());
  const double cv = f.grid().cell_volume();
  for (auto& z : c) z *= cv;
  return SpectralField3(f.grid(), std::move(c));
}

ScalarField3 synthesize(const SpectralField3& s) {
  auto c = s.coeffs();
  const double cv = s.grid().cell_volume();
  for (auto& z : c) z /= cv;
  return ScalarField3(s.grid(), fft::inverse_to_real(s.grid(), c));
}

}  // namespace zyg
