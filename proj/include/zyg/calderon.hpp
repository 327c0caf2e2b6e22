#pragma once

#include <cstdint>

#include "zyg/frames.hpp"
#include "zyg/geometry.hpp"

namespace zyg {

// Configuration for the split Id = E + R over the refinement-N lattices: per
// shell (j,k) the box is tiled by cells of sides (2^(j-N), 2^(k-N),
// 2^(j+k-2N)) and the frame coefficient is frozen at one sample point per
// cell.
struct CalderonConfig {
  BumpPair bumps;
  JkSet jk_set;
  int refinement = 2;  // N
  SamplePolicy policy = SamplePolicy::lower_left;
  std::uint64_t policy_seed = 7;  // for random_fixed: fixed points, chosen once
};

// E f = sum_{j,k} psi_{j,k} * (sample-and-hold of psi_{j,k} * f); linear and,
// for a fixed policy, deterministic.
ScalarField3 essential_part(const ScalarField3& f, const CalderonConfig& cfg);

// R f computed directly from its definition, shell by shell:
// psi_{j,k} * (psi_{j,k}*f - its cell samples). For band-limited f the split
// E f + R f = f holds to roundoff and is verified here.
ScalarField3 remainder_apply(const ScalarField3& f, const CalderonConfig& cfg);

// Same operator without the split verification (for inner loops).
ScalarField3 remainder_apply_raw(const ScalarField3& f, const CalderonConfig& cfg);

// Adjoint of R on L2 of the grid; the sample-and-hold adjoint collapses each
// cell's mass onto its sample node.
ScalarField3 remainder_adjoint(const ScalarField3& f, const CalderonConfig& cfg);

struct NormEstimate {
  double lower_bound = 0.0;   // best probe Rayleigh quotient
  double dominant = 0.0;      // power-iteration value on R*R
  bool converged = false;
  int iterations = 0;
};

// Operator norm of R on the band-limited subspace: random-probe lower bounds
// refined by power iteration on R*R.
NormEstimate remainder_norm(const Grid3& grid, const CalderonConfig& cfg, int probes,
                            int max_iterations = 200, std::uint64_t seed = 99);

struct ReproduceResult {
  double remainder_norm_used = 0.0;
  std::vector<double> residuals;  // relative L2 residual after n terms
  ExperimentReport report;
};

// Neumann reconstruction f ~= sum_{n<=terms} R^n (E f); the residual after T
// terms is exactly ||R^(T+1) f|| / ||f|| and must decay geometrically at the
// measured norm.
ReproduceResult reproduce(const ScalarField3& f, const CalderonConfig& cfg, int neumann_terms,
                          const NormEstimate& norm);

}  // namespace zyg
