#include "zyg/calderon.hpp"

#include <cmath>

#include "zyg/errors.hpp"
#include "zyg/field_ops.hpp"

namespace zyg {
namespace {

struct CellGrid {
  index3 cells;       // cells per axis
  index3 nodes;       // nodes per cell per axis
  std::vector<std::int64_t> sample;  // flat node index per cell
};

// Cell partition for the split; unlike the public lattice builder this path
// admits single-grid-cell cells, where sample-and-hold is the identity and
// the remainder degenerates to zero.
CellGrid cell_grid(const Grid3& grid, const BumpPair& bumps, int j, int k, int N,
                   SamplePolicy policy, std::uint64_t seed) {
  (void)bumps;
  CellGrid cg;
  const point3 sides{std::ldexp(1.0, j - N), std::ldexp(1.0, k - N),
                     std::ldexp(1.0, j + k - 2 * N)};
  for (int a = 0; a < 3; ++a) {
    const double ratio = sides[a] / grid.spacing(a);
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || rounded < 1.0)
      throw geometry_error("Calderon cells must hold a whole number of grid cells on axis " +
                           std::to_string(a));
    cg.nodes[a] = std::int64_t(rounded);
    if (grid.count(a) % cg.nodes[a] != 0)
      throw geometry_error("Calderon cell side does not divide the box on axis " +
                           std::to_string(a));
    cg.cells[a] = grid.count(a) / cg.nodes[a];
  }
  cg.sample.resize(cg.cells[0] * cg.cells[1] * cg.cells[2]);
  Rng rng(seed ^ (std::uint64_t(j + 64) << 32) ^ std::uint64_t(k + 64));
  std::int64_t c = 0;
  for (std::int64_t a = 0; a < cg.cells[0]; ++a)
    for (std::int64_t b = 0; b < cg.cells[1]; ++b)
      for (std::int64_t d = 0; d < cg.cells[2]; ++d, ++c) {
        index3 corner{a * cg.nodes[0], b * cg.nodes[1], d * cg.nodes[2]};
        index3 pick = corner;
        switch (policy) {
          case SamplePolicy::lower_left:
            break;
          case SamplePolicy::center:
            for (int ax = 0; ax < 3; ++ax) pick[ax] += cg.nodes[ax] / 2;
            break;
          case SamplePolicy::random_fixed:
            for (int ax = 0; ax < 3; ++ax) pick[ax] += rng.integer(0, cg.nodes[ax] - 1);
            break;
        }
        cg.sample[c] = grid.flat(pick[0], pick[1], pick[2]);
      }
  return cg;
}

ScalarField3 sample_and_hold(const ScalarField3& f, const CellGrid& cg) {
  std::vector<double> v(f.size());
  const auto& grid = f.grid();
  std::int64_t c = 0;
  for (std::int64_t a = 0; a < cg.cells[0]; ++a)
    for (std::int64_t b = 0; b < cg.cells[1]; ++b)
      for (std::int64_t d = 0; d < cg.cells[2]; ++d, ++c) {
        const double val = f[cg.sample[c]];
        for (std::int64_t u = 0; u < cg.nodes[0]; ++u)
          for (std::int64_t w = 0; w < cg.nodes[1]; ++w) {
            const std::int64_t base =
                grid.flat(a * cg.nodes[0] + u, b * cg.nodes[1] + w, d * cg.nodes[2]);
            for (std::int64_t z = 0; z < cg.nodes[2]; ++z) v[base + z] = val;
          }
      }
  return ScalarField3(grid, std::move(v));
}

// Adjoint of sample_and_hold in the node-sum inner product: each cell's sum
// lands on the sample node.
ScalarField3 collapse_to_samples(const ScalarField3& f, const CellGrid& cg) {
  std::vector<double> v(f.size(), 0.0);
  const auto& grid = f.grid();
  std::int64_t c = 0;
  for (std::int64_t a = 0; a < cg.cells[0]; ++a)
    for (std::int64_t b = 0; b < cg.cells[1]; ++b)
      for (std::int64_t d = 0; d < cg.cells[2]; ++d, ++c) {
        double acc = 0.0;
        for (std::int64_t u = 0; u < cg.nodes[0]; ++u)
          for (std::int64_t w = 0; w < cg.nodes[1]; ++w) {
            const std::int64_t base =
                grid.flat(a * cg.nodes[0] + u, b * cg.nodes[1] + w, d * cg.nodes[2]);
            for (std::int64_t z = 0; z < cg.nodes[2]; ++z) acc += f[base + z];
          }
        v[cg.sample[c]] = acc;
      }
  return ScalarField3(grid, std::move(v));
}

void validate(const Grid3& grid, const CalderonConfig& cfg) {
  if (cfg.jk_set.empty()) throw parameter_error("Calderon: empty shell set");
  if (cfg.refinement < 0) throw parameter_error("Calderon: refinement must be nonnegative");
  for (auto [j, k] : cfg.jk_set) {
    if (!shell_resolvable(grid, cfg.bumps, j, k))
      throw resolution_error("Calderon: shell out of band; " +
                             describe_admissible(grid, cfg.bumps));
    cell_grid(grid, cfg.bumps, j, k, cfg.refinement, cfg.policy, cfg.policy_seed);
  }
}

}  // namespace

ScalarField3 essential_part(const ScalarField3& f, const CalderonConfig& cfg) {
  validate(f.grid(), cfg);
  auto acc = ScalarField3::zeros(f.grid());
  for (auto [j, k] : cfg.jk_set) {
    auto m = shell_multiplier(f.grid(), cfg.bumps, j, k);
    auto F = shell_convolve(f, m);
    auto cg = cell_grid(f.grid(), cfg.bumps, j, k, cfg.refinement, cfg.policy, cfg.policy_seed);
    acc = acc + shell_convolve(sample_and_hold(F, cg), m);
  }
  return acc;
}

ScalarField3 remainder_apply_raw(const ScalarField3& f, const CalderonConfig& cfg) {
  validate(f.grid(), cfg);
  auto acc = ScalarField3::zeros(f.grid());
  for (auto [j, k] : cfg.jk_set) {
    auto m = shell_multiplier(f.grid(), cfg.bumps, j, k);
    auto F = shell_convolve(f, m);
    auto cg = cell_grid(f.grid(), cfg.bumps, j, k, cfg.refinement, cfg.policy, cfg.policy_seed);
    acc = acc + shell_convolve(F - sample_and_hold(F, cg), m);
  }
  return acc;
}

ScalarField3 remainder_apply(const ScalarField3& f, const CalderonConfig& cfg) {
  auto R = remainder_apply_raw(f, cfg);
  auto E = essential_part(f, cfg);
  const double fn = l2_norm(f);
  if (fn > 0.0) {
    const double split = l2_norm(f - (E + R)) / fn;
    if (split > 1e-9)
      throw data_error("remainder_apply: E + R failed to reproduce f (relative gap " +
                       std::to_string(split) + "); is f band-limited to the shell set?");
  }
  return R;
}

ScalarField3 remainder_adjoint(const ScalarField3& f, const CalderonConfig& cfg) {
  validate(f.grid(), cfg);
  auto acc = ScalarField3::zeros(f.grid());
  for (auto [j, k] : cfg.jk_set) {
    auto m = shell_multiplier(f.grid(), cfg.bumps, j, k);
    auto F = shell_convolve(f, m);
    auto cg = cell_grid(f.grid(), cfg.bumps, j, k, cfg.refinement, cfg.policy, cfg.policy_seed);
    acc = acc + shell_convolve(F - collapse_to_samples(F, cg), m);
  }
  return acc;
}

NormEstimate remainder_norm(const Grid3& grid, const CalderonConfig& cfg, int probes,
                            int max_iterations, std::uint64_t seed) {
  if (probes < 8) throw parameter_error("remainder_norm: need at least 8 probes");
  validate(grid, cfg);
  Rng rng(seed);
  NormEstimate est;
  ScalarField3 best = ScalarField3::zeros(grid);
  for (int p = 0; p < probes; ++p) {
    auto f = random_band_limited(grid, cfg.bumps, cfg.jk_set, rng);
    const double fn = l2_norm(f);
    if (fn == 0.0) continue;
    const double q = l2_norm(remainder_apply_raw(f, cfg)) / fn;
    if (q > est.lower_bound) {
      est.lower_bound = q;
      best = f;
    }
  }
  // Power iteration on R*R starting from the best probe.
  ScalarField3 v = best;
  double lam = est.lower_bound * est.lower_bound;
  for (int it = 0; it < max_iterations; ++it) {
    auto w = remainder_adjoint(remainder_apply_raw(v, cfg), cfg);
    const double wn = l2_norm(w);
    if (wn == 0.0) break;
    const double lam_new = inner(v, w) / (l2_norm(v) * l2_norm(v));
    v = w * (1.0 / wn);
    est.iterations = it + 1;
    if (it > 2 && std::abs(lam_new - lam) <= 1e-6 * std::abs(lam_new)) {
      lam = lam_new;
      est.converged = true;
      break;
    }
    lam = lam_new;
  }
  est.dominant = std::sqrt(std::max(0.0, lam));
  est.lower_bound = std::max(est.lower_bound, 0.0);
  if (est.dominant < est.lower_bound) est.dominant = est.lower_bound;
  return est;
}

ReproduceResult reproduce(const ScalarField3& f, const CalderonConfig& cfg, int neumann_terms,
                          const NormEstimate& norm) {
  const double rho = norm.dominant > 0.0 ? norm.dominant : norm.lower_bound;
  if (!(rho < 1.0))
    throw parameter_error("reproduce: remainder norm not verified below 1 (got " +
                          std::to_string(rho) + ")");
  ReproduceResult res{rho, {}, ExperimentReport("calderon_reproduce")};
  const double fn = l2_norm(f);
  if (fn == 0.0) {
    res.residuals.assign(neumann_terms + 1, 0.0);
    res.report.metrics()["residuals"] = res.residuals;
    res.report.check_le("final_residual", 0.0, 1e-4);
    return res;
  }
  auto Ef = essential_part(f, cfg);
  ScalarField3 term = Ef;
  ScalarField3 sum = Ef;
  res.residuals.push_back(l2_norm(f - sum) / fn);
  for (int n = 1; n <= neumann_terms; ++n) {
    term = remainder_apply_raw(term, cfg);
    sum = sum + term;
    res.residuals.push_back(l2_norm(f - sum) / fn);
  }
  res.report.meta()["terms"] = neumann_terms;
  res.report.meta()["refinement"] = cfg.refinement;
  res.report.metrics()["remainder_norm"] = rho;
  res.report.metrics()["residuals"] = res.residuals;
  // Geometric decay: consecutive residual ratios should track the norm.
  std::vector<double> ratios;
  for (std::size_t i = 1; i < res.residuals.size(); ++i)
    if (res.residuals[i - 1] > 1e-13 && res.residuals[i] > 1e-13)
      ratios.push_back(res.residuals[i] / res.residuals[i - 1]);
  if (!ratios.empty()) res.report.metrics()["residual_ratios"] = ratios;
  return res;
}

}  // namespace zyg
