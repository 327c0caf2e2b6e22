#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zyg/field_ops.hpp"
#include "zyg/frames.hpp"
#include "zyg/kernels.hpp"
#include "zyg/weights.hpp"

namespace zyg {

// Linear operator handle: an action and (when available) its L2 adjoint.
struct LinearOperator {
  std::function<ScalarField3(const ScalarField3&)> apply;
  std::function<ScalarField3(const ScalarField3&)> apply_adjoint;
};

// T f = K * f with the truncated kernel sampled on f's grid.
ScalarField3 apply_T(const KernelSpec& kernel, const ScalarField3& f);

// Convolution operator by a fixed kernel field; adjoint is convolution by the
// reflected kernel.
LinearOperator convolution_operator(const ScalarField3& kernel_field);

struct CommutatorSpec {
  KernelSpec kernel;
  std::vector<ScalarField3> symbols;  // nested left to right: [b_k,...,[b_1,T]...]
};

// [b,T] f = b (Tf) - T(b f); higher orders nest.
ScalarField3 commutator_apply(const CommutatorSpec& spec, const ScalarField3& f);

// Same commutator as a reusable handle over a prebuilt kernel field.
LinearOperator commutator_operator(const ScalarField3& kernel_field,
                                   const std::vector<ScalarField3>& symbols);

struct OpNormEstimate {
  double p = 2.0;
  std::string weight_id;
  double lower_bound = 0.0;  // best probe Rayleigh quotient (certified)
  double dominant = 0.0;     // power-iteration singular value, p = 2 only
  bool has_dominant = false;
  bool converged = false;
  int probes = 0;
  int iterations = 0;
};

// Weighted operator norm estimate: random probes for every p, plus power
// iteration on the similarity-transformed operator when p = 2 and an adjoint
// is available.
OpNormEstimate weighted_opnorm(const LinearOperator& op, double p, const ScalarField3& w,
                               const std::function<ScalarField3(Rng&)>& probe_gen, int probes,
                               int iterations, Rng& rng, const std::string& weight_id = "");

struct CounterexampleConfig {
  ScaleRange base_range{-2, 2, -2, 2};  // truncation level A
  ScaleRange wide_range{-3, 3, -3, 3};  // truncation level B
  std::vector<double> a_values{1.0, 2.0, 4.0, 8.0};
  int points_per_decade = 16;  // symbol sup search lattice
  // Frequency window for the sup. The derivative sup on a window saturates
  // once the truncation range covers the window's scale ratios (the live
  // direction is the xi1 = 0 plane, where the active scale is xi2/xi3); a
  // window too wide in ratio keeps growing with every added scale, which is
  // just the multiplier scale covariance. Two octaves of ratio around the
  // central annulus keep the base range saturating.
  double freq_lo = 1.0, freq_hi = 4.0;
};

// (i) sup over frequencies of |d/dxi1 K^| for the dyadic-sum kernel at two
// truncation levels (the symbol is evaluated from the exact per-term Fourier
// transforms of the polynomial profile); (ii) mean oscillation of b(x) = x1
// over the rectangles (a,2a]x(a,2a]x(a,a+a^2], whose growth slope in a is 1/4.
ExperimentReport counterexample_experiment(const KernelSpec& rs_spec,
                                           const CounterexampleConfig& cfg);

// Exact symbol-derivative evaluation |d/dxi1 K^(xi)| for a dyadic-sum kernel
// (exposed for the dual-route check against spectral differentiation).
double rs_symbol_dxi1(const KernelSpec& rs_spec, const ScaleRange& range, const point3& xi);

struct LowerBoundResult {
  double kernel_floor = 0.0;       // min K(x-y) * 2 * 49^2 |R| over R x R~ nodes
  bool kernel_positive = false;
  double lhs = 0.0;                // sum_i (1/|R|) int_R |[b,T] chi_{F_i}|
  double rhs = 0.0;                // (1/(4*49^2)) (1/|R|) int_R |b - m|
  double median_value = 0.0;
  double weight_factor = 0.0;      // measured Holder factor of the weighted chain
  double ap_char_hat = 0.0;        // [w] over the enclosing rectangle
  double enclosing_ratio = 0.0;    // |R^| / |R|
  ExperimentReport report;
};

// The commutator lower-bound construction: companion rectangle at offsets
// (5 lI, 5 lJ, 47 lS), median split into F_1/F_2 and E_1/E_2, kernel floor
// 1/(2*49^2 |R|), and the averaged commutator inequality with constant
// 1/(4*49^2).
LowerBoundResult lower_bound_experiment(const ScalarField3& b, const ZygmundRectangle& R,
                                        double p, const ScalarField3& w);

struct SweepEntry {
  std::string b_id;
  std::string w_id;
  double p = 2.0;
  double bmo = 0.0;
  double opnorm_lower = 0.0;
  double ratio = 0.0;
};

// Ratio (estimated ||[b,T]||) / ||b||_bmo across a symbol family; the sweep
// asserts max/min <= 3 per (w,p).
ExperimentReport upper_bound_sweep(const KernelSpec& kernel,
                                   const std::vector<std::pair<std::string, ScalarField3>>& bs,
                                   const std::vector<std::pair<std::string, ScalarField3>>& ws,
                                   const std::vector<double>& p_list,
                                   const RectangleFamily& family,
                                   const std::function<ScalarField3(Rng&)>& probe_gen,
                                   int probes, Rng& rng, std::vector<SweepEntry>* entries = nullptr);

}  // namespace zyg
