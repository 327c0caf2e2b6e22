#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <fstream>

#include "oracles.hpp"
#include "zyg/errors.hpp"
#include "zyg/field_io.hpp"
#include "zyg/field_ops.hpp"
#include "zyg/rng.hpp"

using namespace zyg;

TEST_CASE("convolution with a unit-mass delta is the identity") {
  Grid3 grid = Grid3::cubic(2.0, 8);
  Rng rng(42);
  auto f = random_field(grid, rng);
  auto d = ScalarField3::delta(grid, {0, 0, 0});
  auto conv = fft_convolve(f, d);
  double worst = 0.0;
  for (std::int64_t i = 0; i < f.size(); ++i)
    worst = std::max(worst, std::abs(conv[i] - f[i]));
  CHECK(worst / f.max_abs() <= 1e-10);
}

TEST_CASE("convolution with the constant 1 returns the integral") {
  Grid3 grid = Grid3::cubic(2.0, 8);
  Rng rng(7);
  auto g = random_field(grid, rng);
  auto ones = ScalarField3::constant(grid, 1.0);
  auto conv = fft_convolve(ones, g);
  const double total = integrate(g);
  for (std::int64_t i = 0; i < conv.size(); i += 37)
    CHECK(conv[i] == doctest::Approx(total).epsilon(1e-10));
}

TEST_CASE("fft convolution matches the direct quadrature oracle on 8^3") {
  Grid3 grid = Grid3::cubic(1.0, 8);
  Rng rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    auto f = random_field(grid, rng);
    auto g = random_field(grid, rng);
    auto fast = fft_convolve(f, g);
    auto slow = oracle::convolve(f, g);
    double worst = 0.0;
    for (std::int64_t i = 0; i < fast.size(); ++i)
      worst = std::max(worst, std::abs(fast[i] - slow[i]));
    CHECK(worst / slow.max_abs() <= 1e-10);
  }
}

TEST_CASE("convolution is commutative and bilinear") {
  Grid3 grid = Grid3::cubic(1.0, 8);
  Rng rng(11);
  auto f = random_field(grid, rng);
  auto g = random_field(grid, rng);
  auto h = random_field(grid, rng);
  auto fg = fft_convolve(f, g);
  auto gf = fft_convolve(g, f);
  double worst = 0.0;
  for (std::int64_t i = 0; i < fg.size(); ++i)
    worst = std::max(worst, std::abs(fg[i] - gf[i]));
  CHECK(worst <= 1e-10 * fg.max_abs());
  auto lhs = fft_convolve(f + h * 2.0, g);
  auto rhs = fft_convolve(f, g) + fft_convolve(h, g) * 2.0;
  worst = 0.0;
  for (std::int64_t i = 0; i < lhs.size(); ++i)
    worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
  CHECK(worst <= 1e-10 * lhs.max_abs());
}

TEST_CASE("convolution rejects mismatched grids and non-finite data") {
  Grid3 a = Grid3::cubic(1.0, 8);
  Grid3 b = Grid3::cubic(2.0, 8);
  auto fa = ScalarField3::constant(a, 1.0);
  auto fb = ScalarField3::constant(b, 1.0);
  CHECK_THROWS_AS(fft_convolve(fa, fb), dimension_error);
  auto bad = fa.map([](double) { return std::nan(""); });
  CHECK_THROWS_AS(fft_convolve(fa, bad), data_error);
}

TEST_CASE("lp norm normalization, homogeneity in the weight, and the oracle") {
  Grid3 grid = Grid3::cubic(1.0, 8);  // unit volume
  auto one = ScalarField3::constant(grid, 1.0);
  for (double p : {1.0, 2.0, 3.5}) CHECK(lp_norm(one, p) == doctest::Approx(1.0));

  Rng rng(5);
  auto f = random_field(grid, rng);
  auto w = random_field(grid, rng).map([](double v) { return 0.1 + v * v; });
  const double n1 = lp_norm(f, 3.0, w);
  const double n2 = lp_norm(f, 3.0, w * 2.0);
  CHECK(n2 / n1 == doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-12));
  CHECK(lp_norm(f, 3.0, w) == doctest::Approx(oracle::lp_norm(f, 3.0, &w)).epsilon(1e-12));

  CHECK_THROWS_AS(lp_norm(f, 0.5), parameter_error);
  auto wbad = w.map([](double v) { return v - 10.0; });
  CHECK_THROWS_AS(lp_norm(f, 2.0, wbad), weight_error);
}

TEST_CASE("lp norm triangle inequality and weight monotonicity") {
  Grid3 grid = Grid3::cubic(1.0, 8);
  Rng rng(17);
  for (int t = 0; t < 5; ++t) {
    auto f = random_field(grid, rng);
    auto g = random_field(grid, rng);
    auto w = random_field(grid, rng).map([](double v) { return 0.1 + v * v; });
    const double p = 1.0 + 2.5 * (t % 3);
    CHECK(lp_norm(f + g, p, w) <= lp_norm(f, p, w) + lp_norm(g, p, w) + 1e-12);
    auto w2 = w.map([](double v) { return v * 1.5 + 0.2; });  // pointwise larger
    CHECK(lp_norm(f, p, w2) >= lp_norm(f, p, w) - 1e-12);
  }
}

TEST_CASE("integrate: constants, complement additivity, wrap-around") {
  Grid3 grid = Grid3::cell_centered({2.0, 2.0, 4.0}, {16, 16, 16});
  auto c = ScalarField3::constant(grid, 3.0);
  ZygmundRectangle r{{0.5, 0.25, 1.0}, {0.5, 1.0, 0.5}};
  CHECK(integrate(c, r) == doctest::Approx(3.0 * r.volume()).epsilon(1e-12));

  Rng rng(23);
  auto f = random_field(grid, rng);
  ZygmundRectangle full{{0.0, 0.0, 0.0}, {2.0, 2.0, 4.0}};
  // Complement additivity in the first axis.
  ZygmundRectangle left{{0.0, 0.0, 0.0}, {0.75, 2.0, 4.0}};
  ZygmundRectangle right{{0.75, 0.0, 0.0}, {1.25, 2.0, 4.0}};
  CHECK(integrate(f) ==
        doctest::Approx(integrate(f, left) + integrate(f, right)).epsilon(1e-12));
  CHECK(integrate(f) == doctest::Approx(integrate(f, full)).epsilon(1e-12));

  // A region pushed over the seam covers the same nodes.
  ZygmundRectangle wrapped{{1.75, 0.25, 0.5}, {0.5, 0.5, 0.25}};
  auto nr = node_range(grid, wrapped);
  CHECK(nr.extent[0] * nr.extent[1] * nr.extent[2] > 0);
  double manual = 0.0;
  for_each_node(grid, nr, [&](std::int64_t idx) { manual += f[idx]; });
  CHECK(integrate(f, wrapped) == doctest::Approx(manual * grid.cell_volume()).epsilon(1e-12));

  ZygmundRectangle degenerate{{0.0, 0.0, 0.0}, {-1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(integrate(f, degenerate), geometry_error);
}

TEST_CASE("integrate converges at second order on a smooth profile") {
  // Gaussian bump integrated over the left half of the box; Richardson order
  // from three dyadic resolutions.
  auto profile = [](point3 x) {
    return std::exp(-8.0 * ((x[0] - 0.9) * (x[0] - 0.9) + (x[1] - 1.0) * (x[1] - 1.0) +
                            (x[2] - 1.1) * (x[2] - 1.1)));
  };
  ZygmundRectangle half{{0.0, 0.0, 0.0}, {1.0, 2.0, 2.0}};
  auto value_at = [&](std::int64_t n) {
    Grid3 grid = Grid3::cell_centered({2.0, 2.0, 4.0}, {n, n, n});
    return integrate(ScalarField3::sample(grid, profile), half);
  };
  const double v1 = value_at(16), v2 = value_at(32), v3 = value_at(64);
  const double order = std::log2(std::abs(v1 - v3) / std::abs(v2 - v3) - 1.0);
  CHECK(order >= 1.8);
}

TEST_CASE("Parseval holds for the fixed transform normalization") {
  Grid3 grid = Grid3::cubic(2.0, 16);
  Rng rng(31);
  auto f = random_field(grid, rng);
  auto spec = analyze(f);
  double acc = 0.0;
  for (const auto& z : spec.coeffs()) acc += std::norm(z);
  const double lhs = l2_norm(f) * l2_norm(f);
  const double rhs = acc / grid.box_volume();
  CHECK(std::abs(lhs - rhs) / lhs <= 1e-12);
  // Round trip.
  auto back = synthesize(spec);
  double worst = 0.0;
  for (std::int64_t i = 0; i < f.size(); ++i)
    worst = std::max(worst, std::abs(back[i] - f[i]));
  CHECK(worst / f.max_abs() <= 1e-12);
}

TEST_CASE("binary field serialization round-trips") {
  Grid3 grid = Grid3::cell_centered({1.0, 2.0, 2.0}, {8, 8, 16});
  Rng rng(91);
  auto f = random_field(grid, rng);
  const std::string path = "field_roundtrip.zygf";
  write_field(f, path);
  auto g = read_field(path);
  REQUIRE(g.grid() == f.grid());
  for (std::int64_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
  std::remove(path.c_str());
}

TEST_CASE("CSV exports: fields and lattices") {
  Grid3 grid = Grid3::cubic(1.0, 4);
  Rng rng(3);
  auto f = random_field(grid, rng);
  write_field_csv(f, "field_dump.csv");
  std::ifstream is("field_dump.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "i1,i2,i3,x1,x2,x3,value");
  int lines = 0;
  for (std::string line; std::getline(is, line);) ++lines;
  CHECK(lines == 64);
  std::remove("field_dump.csv");

  auto lat = build_lattice(Grid3::cubic(1.0, 16), 0, 0, 1);
  write_lattice_csv(lat, "lattice_dump.csv");
  std::ifstream ls("lattice_dump.csv");
  std::getline(ls, header);
  CHECK(header == "j,k,N,corner1,corner2,corner3,lI,lJ,lS");
  lines = 0;
  for (std::string line; std::getline(ls, line);) ++lines;
  CHECK(lines == 16);
  std::remove("lattice_dump.csv");
}
