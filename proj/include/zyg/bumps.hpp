#pragma once

#include <cmath>

#include "zyg/errors.hpp"

namespace zyg {

// Polynomial smoothstep of the given order: 0 for t<=0, 1 for t>=1, C^order
// across the joints.
double smoothstep(int order, double t);

// Smooth annulus window eta(|xi|) supported in (2^(-2/3), 2^(2/3)) subset of
// (1/2, 2], identically 1 on the plateau [2^(-1/3), 2^(1/3)], built from
// smoothstep transitions in the log2 coordinate.
class AnnulusWindow {
 public:
  explicit AnnulusWindow(int smoothness) : order_(smoothness) {
    if (smoothness < 2) throw parameter_error("AnnulusWindow: smoothness must be >= 2");
  }
  // v = log2 |xi|
  double log_eval(double v) const {
    const double a = std::abs(v);
    if (a >= 2.0 / 3.0) return 0.0;
    if (a <= 1.0 / 3.0) return 1.0;
    return smoothstep(order_, 3.0 * (2.0 / 3.0 - a));
  }
  double operator()(double xi) const {
    if (xi == 0.0) return 0.0;
    return log_eval(std::log2(std::abs(xi)));
  }
  int smoothness() const { return order_; }

 private:
  int order_;
};

// Normalized partition-of-unity profile: psi_hat(xi) = eta(xi)/sqrt(D) with
// D = sum_j eta(2^j xi)^2, so sum_j psi_hat(2^j xi)^2 == 1 for every xi != 0.
class DyadicProfile {
 public:
  explicit DyadicProfile(int smoothness) : window_(smoothness) {
    // The window overlaps only its immediate neighbors, so the dyadic
    // square-sum has at most two active terms.
    if (window_.log_eval(0.0) <= 0.0)
      throw config_error("DyadicProfile: cutoff vanishes on the annulus");
  }

  double operator()(double xi) const {
    if (xi == 0.0) return 0.0;
    const double v = std::log2(std::abs(xi));
    return eval_log(v);
  }
  double eval_log(double v) const {
    const double e0 = window_.log_eval(v);
    if (e0 == 0.0) return 0.0;
    double d = e0 * e0;
    const double em = window_.log_eval(v - 1.0);
    const double ep = window_.log_eval(v + 1.0);
    d += em * em + ep * ep;
    return e0 / std::sqrt(d);
  }
  int smoothness() const { return window_.smoothness(); }

 private:
  AnnulusWindow window_;
};

// Which variable is split off against the remaining plane.
enum class Grouping { x1_vs_x2x3, x2_vs_x1x3 };

// Fourier-side pair generating the frame: a 1-D dyadic profile for the split
// variable and a radial one for the plane.
struct BumpPair {
  DyadicProfile psi1;
  DyadicProfile psi2;
  Grouping grouping = Grouping::x1_vs_x2x3;

  double psi1_hat(double xi) const { return psi1(xi); }
  double psi2_hat(double xia, double xib) const {
    return psi2(std::sqrt(xia * xia + xib * xib));
  }
};

BumpPair build_bump_pair(int smoothness, Grouping grouping = Grouping::x1_vs_x2x3);

}  // namespace zyg
