#include "zyg/weights.hpp"

#include <algorithm>
#include <cmath>

#include "zyg/errors.hpp"

namespace zyg {
namespace {

// Inclusive 3-D prefix table for O(1) box sums; wrapped ranges split into at
// most two segments per axis.
class PrefixSum3 {
 public:
  PrefixSum3(const Grid3& grid, const std::vector<double>& v) : n_(grid.counts()) {
    s_.assign(std::size_t((n_[0] + 1) * (n_[1] + 1) * (n_[2] + 1)), 0.0);
    for (std::int64_t i = 0; i < n_[0]; ++i)
      for (std::int64_t j = 0; j < n_[1]; ++j)
        for (std::int64_t k = 0; k < n_[2]; ++k) {
          const double val = v[(i * n_[1] + j) * n_[2] + k];
          at(i + 1, j + 1, k + 1) = val + at(i, j + 1, k + 1) + at(i + 1, j, k + 1) +
                                    at(i + 1, j + 1, k) - at(i, j, k + 1) - at(i, j + 1, k) -
                                    at(i + 1, j, k) + at(i, j, k);
        }
  }

  // Sum over [a0,a1) x [b0,b1) x [c0,c1), indices already in [0, n].
  double box(std::int64_t a0, std::int64_t a1, std::int64_t b0, std::int64_t b1,
             std::int64_t c0, std::int64_t c1) const {
    return at(a1, b1, c1) - at(a0, b1, c1) - at(a1, b0, c1) - at(a1, b1, c0) + at(a0, b0, c1) +
           at(a0, b1, c0) + at(a1, b0, c0) - at(a0, b0, c0);
  }

  // Sum over a wrapped NodeRange.
  double range(const NodeRange& nr) const {
    double acc = 0.0;
    std::int64_t seg[3][2][2];
    int nseg[3];
    for (int a = 0; a < 3; ++a) {
      const std::int64_t first = Grid3::mod(nr.first[a], n_[a]);
      const std::int64_t len = nr.extent[a];
      if (first + len <= n_[a]) {
        seg[a][0][0] = first;
        seg[a][0][1] = first + len;
        nseg[a] = 1;
      } else {
        seg[a][0][0] = first;
        seg[a][0][1] = n_[a];
        seg[a][1][0] = 0;
        seg[a][1][1] = first + len - n_[a];
        nseg[a] = 2;
      }
    }
    for (int i = 0; i < nseg[0]; ++i)
      for (int j = 0; j < nseg[1]; ++j)
        for (int k = 0; k < nseg[2]; ++k)
          acc += box(seg[0][i][0], seg[0][i][1], seg[1][j][0], seg[1][j][1], seg[2][k][0],
                     seg[2][k][1]);
    return acc;
  }

 private:
  double& at(std::int64_t i, std::int64_t j, std::int64_t k) {
    return s_[std::size_t((i * (n_[1] + 1) + j) * (n_[2] + 1) + k)];
  }
  double at(std::int64_t i, std::int64_t j, std::int64_t k) const {
    return s_[std::size_t((i * (n_[1] + 1) + j) * (n_[2] + 1) + k)];
  }
  index3 n_;
  std::vector<double> s_;
};

int log2_floor(std::int64_t v) {
  int p = 0;
  while ((std::int64_t(1) << (p + 1)) <= v) ++p;
  return p;
}

}  // namespace

RectangleFamily dyadic_family(const Grid3& grid, bool translated, std::size_t cap) {
  const auto L = grid.extents();
  if (std::abs(L[2] - L[0] * L[1]) > 1e-10 * L[2])
    throw geometry_error("dyadic_family: box extents must satisfy L3 = L1*L2");
  RectangleFamily fam;
  fam.descriptor = translated ? "translated_dyadic" : "dyadic_lattice";
  const int p_max = log2_floor(grid.count(0)) - 1;
  const int q_max = log2_floor(grid.count(1)) - 1;
  const int s_max = log2_floor(grid.count(2)) - 1;
  for (int p = 0; p <= p_max; ++p)
    for (int q = 0; q <= q_max; ++q) {
      if (p + q > s_max) continue;
      const point3 sides{L[0] * std::ldexp(1.0, -p), L[1] * std::ldexp(1.0, -q),
                         L[2] * std::ldexp(1.0, -(p + q))};
      const int shifts = translated ? 8 : 1;
      for (int sh = 0; sh < shifts; ++sh) {
        const point3 off{(sh & 1) ? 0.5 * sides[0] : 0.0, (sh & 2) ? 0.5 * sides[1] : 0.0,
                         (sh & 4) ? 0.5 * sides[2] : 0.0};
        for (std::int64_t a = 0; a < (std::int64_t(1) << p); ++a)
          for (std::int64_t b = 0; b < (std::int64_t(1) << q); ++b)
            for (std::int64_t c = 0; c < (std::int64_t(1) << (p + q)); ++c) {
              if (fam.rectangles.size() >= cap) {
                fam.descriptor += "(capped)";
                return fam;
              }
              ZygmundRectangle r;
              r.corner = {grid.origin()[0] + double(a) * sides[0] + off[0],
                          grid.origin()[1] + double(b) * sides[1] + off[1],
                          grid.origin()[2] + double(c) * sides[2] + off[2]};
              r.sides = sides;
              fam.rectangles.push_back(r);
            }
      }
    }
  return fam;
}

RectangleFamily explicit_family(std::vector<ZygmundRectangle> rects) {
  for (const auto& r : rects) require_zygmund(r);
  RectangleFamily fam;
  fam.rectangles = std::move(rects);
  fam.descriptor = "explicit_list";
  return fam;
}

ScalarField3 maximal_zygmund(const ScalarField3& f, const RectangleFamily& family) {
  if (family.rectangles.empty()) throw parameter_error("maximal_zygmund: empty family");
  auto absf = f.abs();
  PrefixSum3 ps(f.grid(), absf.values());
  std::vector<double> out = absf.values();
  for (const auto& r : family.rectangles) {
    auto nr = node_range(f.grid(), r);
    const std::int64_t cnt = nr.extent[0] * nr.extent[1] * nr.extent[2];
    if (cnt == 0) continue;
    const double avg = ps.range(nr) / double(cnt);
    for_each_node(f.grid(), nr, [&](std::int64_t idx) {
      if (avg > out[idx]) out[idx] = avg;
    });
  }
  return ScalarField3(f.grid(), std::move(out));
}

ApChar ap_z_characteristic(const ScalarField3& w, double p, const RectangleFamily& family) {
  if (!(p > 1.0)) throw parameter_error("ap_z_characteristic: p must exceed 1");
  if (w.min() <= 0.0) throw weight_error("ap_z_characteristic: weight must be positive");
  if (family.rectangles.empty()) throw parameter_error("ap_z_characteristic: empty family");
  const double dual_pow = -1.0 / (p - 1.0);
  auto wd = w.map([dual_pow](double v) { return std::pow(v, dual_pow); });
  PrefixSum3 pw(w.grid(), w.values());
  PrefixSum3 pd(w.grid(), wd.values());
  ApChar best;
  best.p = p;
  best.value = 0.0;
  for (const auto& r : family.rectangles) {
    auto nr = node_range(w.grid(), r);
    const std::int64_t cnt = nr.extent[0] * nr.extent[1] * nr.extent[2];
    if (cnt == 0) continue;
    const double m1 = pw.range(nr) / double(cnt);
    const double m2 = pd.range(nr) / double(cnt);
    const double val = m1 * std::pow(m2, p - 1.0);
    if (val > best.value) {
      best.value = val;
      best.argmax = r;
    }
  }
  return best;
}

BmoNorm bmo_z_norm(const ScalarField3& b, const RectangleFamily& family) {
  if (family.rectangles.empty()) throw parameter_error("bmo_z_norm: empty family");
  PrefixSum3 ps(b.grid(), b.values());
  BmoNorm best;
  for (const auto& r : family.rectangles) {
    auto nr = node_range(b.grid(), r);
    const std::int64_t cnt = nr.extent[0] * nr.extent[1] * nr.extent[2];
    if (cnt == 0) continue;
    const double avg = ps.range(nr) / double(cnt);
    double osc = 0.0;
    for_each_node(b.grid(), nr, [&](std::int64_t idx) { osc += std::abs(b[idx] - avg); });
    osc /= double(cnt);
    if (osc > best.value) {
      best.value = osc;
      best.argmax = r;
    }
  }
  return best;
}

double median(const ScalarField3& b, const ZygmundRectangle& R) {
  auto nr = node_range(b.grid(), R);
  const std::int64_t cnt = nr.extent[0] * nr.extent[1] * nr.extent[2];
  if (cnt == 0) throw geometry_error("median: rectangle covers no grid node");
  std::vector<double> vals;
  vals.reserve(std::size_t(cnt));
  for_each_node(b.grid(), nr, [&](std::int64_t idx) { vals.push_back(b[idx]); });
  std::sort(vals.begin(), vals.end());
  const std::size_t m = vals.size();
  if (m % 2 == 1) return vals[m / 2];
  return 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
}

JnTailResult jn_tail(const ScalarField3& b, const RectangleFamily& family,
                     std::vector<double> thresholds) {
  JnTailResult res{{}, {}, {}, 0.0, ExperimentReport("jn_tail")};
  res.bmo = bmo_z_norm(b, family).value;
  if (res.bmo <= 0.0) {
    res.report.note("degenerate", "bmo norm is zero; tails vanish identically");
    res.report.metrics()["bmo"] = 0.0;
    return res;
  }
  if (thresholds.empty()) {
    for (int i = 0; i < 16; ++i)
      thresholds.push_back(res.bmo * (1.0 + 7.0 * double(i) / 15.0));
  }
  std::sort(thresholds.begin(), thresholds.end());
  if (thresholds.size() < 4)
    throw parameter_error("jn_tail: need at least 4 thresholds");
  res.thresholds = thresholds;
  res.sup_fraction.assign(thresholds.size(), 0.0);

  PrefixSum3 ps(b.grid(), b.values());
  for (const auto& r : family.rectangles) {
    auto nr = node_range(b.grid(), r);
    const std::int64_t cnt = nr.extent[0] * nr.extent[1] * nr.extent[2];
    if (cnt == 0) continue;
    const double avg = ps.range(nr) / double(cnt);
    std::vector<double> devs;
    devs.reserve(std::size_t(cnt));
    for_each_node(b.grid(), nr, [&](std::int64_t idx) { devs.push_back(std::abs(b[idx] - avg)); });
    std::sort(devs.begin(), devs.end());
    for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
      const auto it = std::upper_bound(devs.begin(), devs.end(), thresholds[ti]);
      const double frac = double(devs.end() - it) / double(cnt);
      if (frac > res.sup_fraction[ti]) res.sup_fraction[ti] = frac;
    }
  }

  // Fit window: usable thresholds (positive fraction), minus 10% at each end.
  std::vector<double> xs, ys;
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    if (res.sup_fraction[i] > 0.0) usable.push_back(i);
  if (usable.size() < 4) throw parameter_error("jn_tail: fewer than 4 usable thresholds");
  const std::size_t lo = usable.size() / 10;
  const std::size_t hi = usable.size() - 1 - usable.size() / 10;
  for (std::size_t u = lo; u <= hi; ++u) {
    xs.push_back(thresholds[usable[u]]);
    ys.push_back(std::log(res.sup_fraction[usable[u]]));
  }
  res.fit = fit_line(xs, ys);
  res.report.meta()["family"] = family.descriptor;
  res.report.metrics()["bmo"] = res.bmo;
  res.report.metrics()["slope"] = res.fit.slope;
  res.report.metrics()["intercept"] = res.fit.intercept;
  res.report.metrics()["r2"] = res.fit.r2;
  res.report.metrics()["rate_times_bmo"] = -res.fit.slope * res.bmo;
  return res;
}

ExpLogResult exp_log_weight_to_bmo(const ScalarField3& w, double p,
                                   const RectangleFamily& family) {
  ExpLogResult res{0.0, 0.0, 0.0, 0.0, false, ExperimentReport("exp_log_weight_to_bmo")};
  auto ap = ap_z_characteristic(w, p, family);
  res.ap_char = ap.value;
  auto logw = w.map([](double v) { return std::log(v); });
  res.bmo_log = bmo_z_norm(logw, family).value;
  res.majorant =
      ap.value * std::max(ap.value, (p - 1.0) * std::pow(ap.value, 1.0 / (p - 1.0)));
  res.report.metrics()["ap_char"] = res.ap_char;
  res.report.metrics()["bmo_log"] = res.bmo_log;
  res.report.metrics()["majorant"] = res.majorant;
  res.report.check_le("bmo_log_vs_majorant", res.bmo_log, res.majorant);
  return res;
}

ExpLogResult exp_log_bmo_to_weight(const ScalarField3& b, const RectangleFamily& family,
                                   double char_target, int max_halvings) {
  ExpLogResult res{0.0, 0.0, 0.0, 0.0, false, ExperimentReport("exp_log_bmo_to_weight")};
  const double bmo = bmo_z_norm(b, family).value;
  res.report.metrics()["bmo"] = bmo;
  if (bmo == 0.0) {
    // Constants: any delta works with characteristic exactly 1.
    res.delta = 1.0;
    res.found = true;
    res.ap_char = 1.0;
    res.report.metrics()["delta"] = res.delta;
    res.report.metrics()["ap_char"] = 1.0;
    res.report.check_le("char_at_delta", 1.0, char_target);
    return res;
  }
  double delta = 1.0 / bmo;
  for (int i = 0; i < max_halvings; ++i) {
    auto wexp = b.map([delta](double v) { return std::exp(delta * v); });
    auto ap = ap_z_characteristic(wexp, 2.0, family);
    if (ap.value <= char_target) {
      res.delta = delta;
      res.found = true;
      res.ap_char = ap.value;
      break;
    }
    res.ap_char = ap.value;
    delta *= 0.5;
  }
  res.report.metrics()["delta"] = res.delta;
  res.report.metrics()["ap_char"] = res.ap_char;
  res.report.check("delta_found", res.found, res.delta, 0.0, "found");
  if (res.found) res.report.check_le("char_at_delta", res.ap_char, char_target);
  return res;
}

}  // namespace zyg
