#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "zyg/calderon.hpp"
#include "zyg/errors.hpp"
#include "zyg/field_ops.hpp"
#include "zyg/rng.hpp"

using namespace zyg;

namespace {

// Product-matched grids (h3 = h1 * h2) let the x3 cell side, which shrinks at
// rate 4^-N, track the refinement all the way to single grid cells.
Grid3 small_grid() { return Grid3({1.0, 1.0, 0.25}, {16, 16, 64}); }
Grid3 norm_grid() { return Grid3({1.0, 1.0, 0.5}, {32, 32, 128}); }

CalderonConfig config_for(int N, SamplePolicy pol = SamplePolicy::lower_left) {
  CalderonConfig cfg{build_bump_pair(8), {{-2, -2}}, N, pol, 7};
  return cfg;
}

// The decay-law measurements live on the coarser shell, whose lattice stays
// nondegenerate through N = 3 on the norm grid.
CalderonConfig decay_config(int N, SamplePolicy pol = SamplePolicy::lower_left) {
  CalderonConfig cfg{build_bump_pair(8), {{-1, -1}}, N, pol, 7};
  return cfg;
}

}  // namespace

TEST_CASE("exact split: E f + R f = f for band-limited f, any policy") {
  Grid3 grid = small_grid();
  for (auto pol : {SamplePolicy::lower_left, SamplePolicy::center, SamplePolicy::random_fixed}) {
    auto cfg = config_for(2, pol);
    Rng rng(9);
    auto f = random_band_limited(grid, cfg.bumps, cfg.jk_set, rng);
    auto E = essential_part(f, cfg);
    auto R = remainder_apply(f, cfg);  // also self-checks the split
    CHECK(l2_norm(f - (E + R)) / l2_norm(f) <= 1e-10);
  }
  // Zero maps to zero.
  auto cfg = config_for(2);
  CHECK(l2_norm(essential_part(ScalarField3::zeros(grid), cfg)) == 0.0);
  CHECK(l2_norm(remainder_apply(ScalarField3::zeros(grid), cfg)) == 0.0);
}

TEST_CASE("E f + R f is the same field under every sample policy") {
  Grid3 grid = small_grid();
  Rng rng(10);
  auto bumps = build_bump_pair(8);
  auto f = random_band_limited(grid, bumps, {{-2, -2}}, rng);
  std::vector<ScalarField3> sums;
  for (auto pol : {SamplePolicy::lower_left, SamplePolicy::center, SamplePolicy::random_fixed}) {
    auto cfg = config_for(2, pol);
    sums.push_back(essential_part(f, cfg) + remainder_apply_raw(f, cfg));
  }
  for (std::size_t i = 1; i < sums.size(); ++i)
    CHECK(l2_norm(sums[i] - sums[0]) / l2_norm(sums[0]) <= 1e-12);
}

TEST_CASE("essential part matches a brute-force cell-sum oracle") {
  Grid3 grid = small_grid();
  auto cfg = config_for(1);
  Rng rng(11);
  auto f = random_band_limited(grid, cfg.bumps, cfg.jk_set, rng);

  auto m = shell_multiplier(grid, cfg.bumps, -2, -2);
  auto F = shell_convolve(f, m);
  auto atom = make_atom(cfg.bumps, -2, -2, grid);
  auto lattice = build_lattice(grid, -2, -2, 1);

  // Direct double loop: sum over cells of (int_R atom(x-y) dy) * F(corner).
  std::vector<double> direct(grid.size(), 0.0);
  const auto n = grid.counts();
  for (const auto& cell : lattice.cells) {
    auto nr = node_range(grid, cell);
    const auto corner = grid.unflat(grid.flat_wrapped(nr.first[0], nr.first[1], nr.first[2]));
    const double coeff = F.at(corner);
    for (std::int64_t x1 = 0; x1 < n[0]; ++x1)
      for (std::int64_t x2 = 0; x2 < n[1]; ++x2)
        for (std::int64_t x3 = 0; x3 < n[2]; ++x3) {
          double cellint = 0.0;
          for_each_node(grid, nr, [&](std::int64_t yflat) {
            auto y = grid.unflat(yflat);
            cellint += atom.field[grid.flat_wrapped(x1 - y[0], x2 - y[1], x3 - y[2])];
          });
          direct[grid.flat(x1, x2, x3)] += cellint * grid.cell_volume() * coeff;
        }
  }
  ScalarField3 oracle_field(grid, std::move(direct));
  auto E = essential_part(f, cfg);
  CHECK(l2_norm(E - oracle_field) / l2_norm(oracle_field) <= 1e-10);
}

TEST_CASE("remainder adjoint satisfies the reversed quadratic form") {
  Grid3 grid = small_grid();
  auto cfg = config_for(2);
  Rng rng(12);
  for (int t = 0; t < 4; ++t) {
    auto u = random_band_limited(grid, cfg.bumps, cfg.jk_set, rng);
    auto v = random_field(grid, rng);
    const double lhs = inner(remainder_apply_raw(u, cfg), v);
    const double rhs = inner(u, remainder_adjoint(v, cfg));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("single-grid-cell cells make the remainder vanish") {
  Grid3 grid = small_grid();
  // Shell (-2,-2) on the matched grid: every axis hits one grid cell at N = 2.
  auto cfg = config_for(2);
  Rng rng(13);
  auto f = random_band_limited(grid, cfg.bumps, cfg.jk_set, rng);
  auto est = remainder_norm(grid, cfg, 8, 40, 5);
  CHECK(est.dominant <= 1e-6);
}

TEST_CASE("remainder norm decays with refinement and dips below one") {
  // N = 0 sits in the aliasing regime (norm pinned at 1); the decay law
  // starts at the first genuine refinement.
  Grid3 grid = norm_grid();
  std::vector<double> norms;
  for (int N = 1; N <= 3; ++N) {
    auto cfg = decay_config(N);
    norms.push_back(remainder_norm(grid, cfg, 8, 200, 17).dominant);
  }
  for (std::size_t i = 1; i < norms.size(); ++i) {
    CHECK(norms[i] < norms[i - 1]);
    const double r = norms[i] / norms[i - 1];
    CHECK(r >= 0.3);
    CHECK(r <= 0.7);
  }
  bool below = false;
  for (std::size_t i = 0; i < norms.size(); ++i) below = below || norms[i] < 1.0;
  CHECK(below);
}

TEST_CASE("policy families agree in the coarse regime and all contract at depth") {
  Grid3 grid = norm_grid();
  double lo = 1e300, hi = 0.0;
  for (auto pol : {SamplePolicy::lower_left, SamplePolicy::center, SamplePolicy::random_fixed}) {
    auto est = remainder_norm(grid, decay_config(1, pol), 8, 200, 23);
    lo = std::min(lo, est.dominant);
    hi = std::max(hi, est.dominant);
    CHECK(remainder_norm(grid, decay_config(3, pol), 8, 200, 24).dominant < 1.0);
  }
  CHECK(hi / lo <= 2.0);
}

TEST_CASE("Neumann reconstruction: residual identities and geometric decay") {
  Grid3 grid = norm_grid();
  auto cfg = decay_config(3);
  Rng rng(15);
  auto f = random_band_limited(grid, cfg.bumps, cfg.jk_set, rng);
  auto est = remainder_norm(grid, cfg, 8, 120, 29);
  REQUIRE(est.dominant < 1.0);

  auto res = reproduce(f, cfg, 20, est);
  // terms = 0 entry equals ||R f|| / ||f||.
  const double r0 = l2_norm(remainder_apply_raw(f, cfg)) / l2_norm(f);
  CHECK(res.residuals.front() == doctest::Approx(r0).epsilon(1e-9));
  CHECK(res.residuals.back() <= 1e-4);
  // Log-residual is roughly affine with slope log(norm): check the tail ratio.
  const std::size_t m = res.residuals.size();
  const double ratio = res.residuals[m - 1] / res.residuals[m - 2];
  CHECK(ratio <= est.dominant * 1.2);
  CHECK(ratio >= est.dominant * 0.5);

  NormEstimate fake;
  fake.dominant = 1.2;
  CHECK_THROWS_AS(reproduce(f, cfg, 5, fake), parameter_error);

  auto zero = reproduce(ScalarField3::zeros(grid), cfg, 5, est);
  CHECK(zero.residuals.back() == 0.0);
}
