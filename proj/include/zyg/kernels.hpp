#pragma once

#include <optional>
#include <vector>

#include "zyg/field.hpp"
#include "zyg/report.hpp"
#include "zyg/rng.hpp"

namespace zyg {

// Compactly supported polynomial bump on [-1,1]: sum_n coef[n] u^n inside,
// zero outside. Mean and Fourier data are exact (closed forms), which keeps
// the dyadic kernel sums and the symbol computations of the multiplier
// experiments quadrature-free.
class PolyBump {
 public:
  explicit PolyBump(std::vector<double> coef);

  // Odd bump c*u*(1-u^2)^3, scaled to unit L1 mass: C^2 at the support edge
  // and mean-zero by oddness.
  static PolyBump default_odd();

  // Even mean-zero bump (1-9u^2)(1-u^2)^3: two vanishing moments, so its
  // transform decays like u^2 at the origin. Dyadic symbol sums built from it
  // saturate quickly, and the symbol derivative vanishes on the xi1 = 0
  // plane.
  static PolyBump default_even2();

  double operator()(double u) const;
  double mean() const;          // integral over [-1,1]
  double abs_mass() const;      // integral of |phi|
  // fourier(xi) = integral phi(u) exp(-2 pi i u xi) du = cos_part - i*sin_part
  double fourier_cos(double xi) const;  // integral phi cos(2 pi xi u)
  double fourier_sin(double xi) const;  // integral phi sin(2 pi xi u)
  // d/dxi of the two parts
  double fourier_cos_deriv(double xi) const;
  double fourier_sin_deriv(double xi) const;

  const std::vector<double>& coef() const { return coef_; }

 private:
  std::vector<double> coef_;
};

// Tensor profile phi = phi1 (x) phi2 (x) phi3; with each factor mean-zero the
// three plane-pair cancellation integrals vanish by Fubini.
struct BumpTriple {
  PolyBump phi1 = PolyBump::default_odd();
  PolyBump phi2 = PolyBump::default_odd();
  PolyBump phi3 = PolyBump::default_odd();
};

enum class KernelFamily { NagelWainger, RicciStein, Tabulated };

struct ScaleRange {
  int j0 = -2, j1 = 2, k0 = -2, k1 = 2;
};

struct KernelSpec {
  KernelFamily family = KernelFamily::NagelWainger;
  double theta1 = 1.0;  // Holder exponent in (0,1]
  double theta2 = 0.5;  // decay exponent in (0,1)
  point3 eps{0.0, 0.0, 0.0};     // zero means "two grid cells" at sampling time
  point3 big{-1.0, -1.0, -1.0};  // negative means "half the box" at sampling time
  std::optional<BumpTriple> rs_profile;
  ScaleRange rs_scales;
  std::optional<ScalarField3> table;

  static KernelSpec nagel_wainger();
  static KernelSpec ricci_stein(ScaleRange scales = {});
  void validate() const;
};

// sgn(x1 x2) / (x1^2 x2^2 + x3^2)
double nw_eval(const point3& x);

// sum over the scale range of 2^(-2(k+j)) phi(x1/2^j, x2/2^k, x3/2^(j+k))
double rs_eval(const KernelSpec& spec, const point3& x);

double kernel_eval(const KernelSpec& spec, const point3& x);

// Samples the kernel on the grid in the centered fundamental domain
// [-L/2, L/2)^3 and applies the hard truncation: zero where any |x_i| < eps_i
// or |x_i| > N_i.
ScalarField3 truncate_to_field(const KernelSpec& spec, const Grid3& grid);

// Resolved truncation bounds for this grid (eps defaults to 2 cells, N to
// L/2 minus one cell).
point3 resolved_eps(const KernelSpec& spec, const Grid3& grid);
point3 resolved_big(const KernelSpec& spec, const Grid3& grid);

// K(rho_{s,t} x) (st)^2 == K(x) for the Nagel-Wainger kernel; reports the
// maximal relative deviation over random trials.
ExperimentReport check_homogeneity(const KernelSpec& spec, int trials, Rng& rng);

enum class CancellationMode { C, Cprime };

struct CancellationConfig {
  std::vector<double> deltas{0.05, 0.2, 1.0};
  std::vector<double> radii{0.5, 2.0, 5.0};
  int quad_points_per_decade = 48;
  int probe_points = 24;  // (x,h) samples for the difference conditions
};

// Evaluates the truncated integrals of the cancellation conditions over the
// (delta, r) lattice and reports the observed constant (sup of LHS/RHS) per
// condition, with a refinement-stability figure; >5% drift raises a
// resolution warning in the report.
ExperimentReport check_cancellation(const KernelSpec& spec, CancellationMode mode,
                                    const CancellationConfig& cfg, Rng& rng);

// Monte-Carlo sup of |finite difference| / (regularity majorant) over
// admissible (x, h, alpha, beta, gamma) tuples, plus a stability figure
// between the half-sample and full-sample sups.
ExperimentReport check_regularity(const KernelSpec& spec, int samples, Rng& rng);

}  // namespace zyg
