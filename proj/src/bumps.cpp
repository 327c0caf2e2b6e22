#include "zyg/bumps.hpp"

namespace zyg {
namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
  return r;
}

}  // namespace

double smoothstep(int order, double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  // General smoothstep S_N(t) = t^(N+1) sum_n C(N+n,n) C(2N+1,N-n) (-t)^n.
  const int N = order;
  double acc = 0.0;
  double tp = 1.0;
  for (int n = 0; n <= N; ++n) {
    acc += binom(N + n, n) * binom(2 * N + 1, N - n) * tp;
    tp *= -t;
  }
  return std::pow(t, N + 1) * acc;
}

BumpPair build_bump_pair(int smoothness, Grouping grouping) {
  if (smoothness < 2) throw parameter_error("build_bump_pair: smoothness must be >= 2");
  return BumpPair{DyadicProfile(smoothness), DyadicProfile(smoothness), grouping};
}

}  // namespace zyg
