#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "zyg/errors.hpp"
#include "zyg/field_io.hpp"
#include "zyg/kernels.hpp"
#include "zyg/rng.hpp"

using namespace zyg;

TEST_CASE("polynomial bump: mean-zero, unit mass, Fourier consistency") {
  auto phi = PolyBump::default_odd();
  CHECK(std::abs(phi.mean()) <= 1e-14);
  CHECK(phi.abs_mass() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(phi(1.2) == 0.0);
  CHECK(phi(-0.3) == doctest::Approx(-phi(0.3)));

  // fourier_sin via dense quadrature.
  for (double xi : {0.0, 0.07, 0.5, 3.0, 17.0, 120.0}) {
    double direct = 0.0;
    const int m = 200000;
    for (int i = 0; i < m; ++i) {
      const double u = -1.0 + (i + 0.5) * (2.0 / m);
      direct += phi(u) * std::sin(2.0 * M_PI * xi * u);
    }
    direct *= 2.0 / m;
    CHECK(phi.fourier_sin(xi) == doctest::Approx(direct).epsilon(1e-6));
    CHECK(phi.fourier_cos(xi) == doctest::Approx(0.0).epsilon(1e-12));
  }
  // Derivative of the sine part against a centered difference.
  for (double xi : {0.3, 2.0, 9.0, 40.0}) {
    const double h = 1e-5;
    const double fd = (phi.fourier_sin(xi + h) - phi.fourier_sin(xi - h)) / (2.0 * h);
    CHECK(phi.fourier_sin_deriv(xi) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("nw_eval: direct values, oddness, singularity") {
  CHECK(nw_eval({1.0, 1.0, 1.0}) == doctest::Approx(0.5));
  CHECK(nw_eval({-1.0, 1.0, 1.0}) == doctest::Approx(-0.5));
  CHECK(nw_eval({2.0, 3.0, 6.0}) == doctest::Approx(1.0 / 72.0));
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    point3 x{rng.sign() * rng.log_uniform(0.1, 5), rng.sign() * rng.log_uniform(0.1, 5),
             rng.sign() * rng.log_uniform(0.1, 5)};
    CHECK(nw_eval({-x[0], x[1], x[2]}) == -nw_eval(x));
    CHECK(nw_eval({x[0], -x[1], x[2]}) == -nw_eval(x));
  }
  CHECK_THROWS_AS(nw_eval({0.0, 1.0, 0.0}), data_error);
  CHECK(nw_eval({0.0, 1.0, 2.0}) == 0.0);  // sgn(0) = 0 off the singular set
}

TEST_CASE("check_homogeneity: algebraic identity and random sweep") {
  CHECK(nw_eval({2.0, 3.0, 6.0}) * 36.0 == doctest::Approx(nw_eval({1.0, 1.0, 1.0})));
  auto spec = KernelSpec::nagel_wainger();
  Rng rng(8);
  auto rep = check_homogeneity(spec, 10000, rng);
  CHECK(rep.passed());
  CHECK(rep.json()["metrics"]["max_relative_deviation"].get<double>() <= 1e-12);
}

TEST_CASE("rs_eval: support, single term, term-by-term oracle") {
  auto spec = KernelSpec::ricci_stein({0, 0, 0, 0});
  // Single term (j,k) = (0,0) is the plain tensor profile.
  const auto& pr = *spec.rs_profile;
  point3 x{0.3, -0.4, 0.2};
  CHECK(rs_eval(spec, x) ==
        doctest::Approx(pr.phi1(x[0]) * pr.phi2(x[1]) * pr.phi3(x[2])).epsilon(1e-14));
  // Outside the union of supports: zero.
  CHECK(rs_eval(spec, {1.5, 0.0, 0.0}) == 0.0);

  auto spec2 = KernelSpec::ricci_stein({-1, 0, -1, 0});
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    point3 y{rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)};
    double direct = 0.0;
    for (int j = -1; j <= 0; ++j)
      for (int k = -1; k <= 0; ++k) {
        const double sj = std::ldexp(1.0, j), sk = std::ldexp(1.0, k),
                     sjk = std::ldexp(1.0, j + k);
        direct += std::ldexp(1.0, -2 * (j + k)) * pr.phi1(y[0] / sj) * pr.phi2(y[1] / sk) *
                  pr.phi3(y[2] / sjk);
      }
    CHECK(rs_eval(spec2, y) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("truncate_to_field zeroes the core and matches pointwise values") {
  Grid3 grid = Grid3::cubic(8.0, 64);
  auto spec = KernelSpec::nagel_wainger();
  spec.eps = {0.25, 0.25, 0.25};
  spec.big = {2.0, 2.0, 2.0};
  auto K = truncate_to_field(spec, grid);
  const auto n = grid.counts();
  for (std::int64_t i1 = 0; i1 < n[0]; i1 += 3)
    for (std::int64_t i2 = 0; i2 < n[1]; i2 += 5)
      for (std::int64_t i3 = 0; i3 < n[2]; i3 += 7) {
        point3 x{grid.centered_coord(0, i1), grid.centered_coord(1, i2),
                 grid.centered_coord(2, i3)};
        const double v = K.at({i1, i2, i3});
        bool inside = true;
        for (int a = 0; a < 3; ++a)
          inside = inside && std::abs(x[a]) >= 0.25 && std::abs(x[a]) <= 2.0;
        if (inside)
          CHECK(v == doctest::Approx(nw_eval(x)).epsilon(1e-12));
        else
          CHECK(v == 0.0);
      }

  // Shrinking eps only adds support.
  auto wide = spec;
  wide.eps = {0.5, 0.5, 0.5};
  auto Kwide = truncate_to_field(wide, grid);
  std::int64_t gained = 0;
  for (std::int64_t i = 0; i < K.size(); ++i) {
    if (Kwide[i] != 0.0) CHECK(K[i] == Kwide[i]);
    if (K[i] != 0.0 && Kwide[i] == 0.0) ++gained;
  }
  CHECK(gained > 0);

  auto bad = spec;
  bad.eps = {grid.spacing(0), 0.25, 0.25};  // below two cells
  CHECK_THROWS_AS(truncate_to_field(bad, grid), resolution_error);
}

TEST_CASE("NW kernel field is odd in x1 and x2 exactly") {
  Grid3 grid = Grid3::cubic(4.0, 32);
  auto K = truncate_to_field(KernelSpec::nagel_wainger(), grid);
  const auto n = grid.counts();
  for (std::int64_t i1 = 0; i1 < n[0]; ++i1)
    for (std::int64_t i2 = 0; i2 < n[1]; i2 += 3)
      for (std::int64_t i3 = 0; i3 < n[2]; i3 += 5) {
        const double v = K.at({i1, i2, i3});
        const double vref = K[grid.flat_wrapped(-i1, i2, i3)];
        CHECK(vref == -v);
      }
}

TEST_CASE("cancellation checker: odd kernels give vanishing constants") {
  CancellationConfig cfg;
  cfg.deltas = {0.1, 0.5};
  cfg.radii = {1.0, 3.0};
  cfg.quad_points_per_decade = 24;
  cfg.probe_points = 8;
  Rng rng(21);
  auto repc = check_cancellation(KernelSpec::nagel_wainger(), CancellationMode::Cprime, cfg,
                                 rng);
  CHECK(repc.json()["metrics"]["observed_constant"].get<double>() <= 1e-8);

  auto rs = KernelSpec::ricci_stein({-1, 1, -1, 1});
  Rng rng2(22);
  auto repr = check_cancellation(rs, CancellationMode::C, cfg, rng2);
  CHECK(repr.json()["metrics"]["observed_constant"].get<double>() <= 1e-8);
}

TEST_CASE("regularity checker: finite and stable constant for NW") {
  auto spec = KernelSpec::nagel_wainger();
  Rng rng(33);
  auto rep = check_regularity(spec, 10000, rng);
  const auto m = rep.json()["metrics"];
  CHECK(std::isfinite(m["observed_constant"].get<double>()));
  CHECK(m["sup_growth_full_over_half"].get<double>() <= 1.10);
}

TEST_CASE("kernel spec validation") {
  auto spec = KernelSpec::nagel_wainger();
  spec.theta2 = 1.5;
  CHECK_THROWS_AS(spec.validate(), parameter_error);
  KernelSpec rs = KernelSpec::ricci_stein();
  rs.rs_profile.reset();
  CHECK_THROWS_AS(rs.validate(), config_error);
  CHECK_THROWS_AS(rs_eval(KernelSpec::nagel_wainger(), {1, 1, 1}), config_error);
}

TEST_CASE("tabulated kernels round-trip through the binary field format") {
  Grid3 grid = Grid3::cubic(4.0, 16);
  auto nw = truncate_to_field(KernelSpec::nagel_wainger(), grid);
  write_field(nw, "kernel_table.zygf");
  KernelSpec tab;
  tab.family = KernelFamily::Tabulated;
  tab.table = read_field("kernel_table.zygf");
  auto again = truncate_to_field(tab, grid);
  double worst = 0.0;
  for (std::int64_t i = 0; i < nw.size(); ++i)
    worst = std::max(worst, std::abs(again[i] - nw[i]));
  CHECK(worst == 0.0);
  std::remove("kernel_table.zygf");
}
