#pragma once

#include <utility>
#include <vector>

#include "zyg/bumps.hpp"
#include "zyg/field.hpp"
#include "zyg/kernels.hpp"
#include "zyg/report.hpp"
#include "zyg/rng.hpp"

namespace zyg {

// One scale pair (j,k): the atom has spatial scale (2^j, 2^k, 2^(j+k)) and its
// Fourier multiplier is psi1_hat(2^j xi_a) psi2_hat(2^k xi_b, 2^(j+k) xi_3),
// with (a,b) fixed by the grouping.
using JkPair = std::pair<int, int>;
using JkSet = std::vector<JkPair>;

JkSet make_jk_set(int j0, int j1, int k0, int k1);

// The shell's Fourier support must clear the zero mode and stay below
// Nyquist on every axis.
bool shell_resolvable(const Grid3& grid, const BumpPair& bumps, int j, int k);
// Largest set of resolvable pairs; the string form of the admissible window
// is used in resolution errors.
JkSet default_jk_set(const Grid3& grid, const BumpPair& bumps);
std::string describe_admissible(const Grid3& grid, const BumpPair& bumps);

// Real multiplier of a shell on the grid's frequency lattice.
std::vector<double> shell_multiplier(const Grid3& grid, const BumpPair& bumps, int j, int k);

struct FrameAtom {
  int j = 0;
  int k = 0;
  ScalarField3 field;
};

// Samples the atom on the grid via its exact band-limited spectrum.
FrameAtom make_atom(const BumpPair& bumps, int j, int k, const Grid3& grid);

// Modes where the square-sum of the shell multipliers over the set equals one
// to 1e-12; fields synthesized there reproduce exactly under the frame.
std::vector<char> identity_mask(const Grid3& grid, const BumpPair& bumps, const JkSet& jks);
std::int64_t mask_size(const std::vector<char>& mask);

// Random real field with spectrum supported on the identity mask.
ScalarField3 random_band_limited(const Grid3& grid, const BumpPair& bumps, const JkSet& jks,
                                 Rng& rng);
// Projection of an arbitrary field onto the masked modes.
ScalarField3 band_project(const ScalarField3& f, const std::vector<char>& mask);

// Square function: pointwise l2 sum of the frame coefficients.
ScalarField3 g_zd(const ScalarField3& f, const BumpPair& bumps, const JkSet& jks);

// Area function: like g_zd but each shell is averaged over the Zygmund box
// |x1-y1| < 2^j, |x2-y2| < 2^k, |x3-y3| < 2^(j+k) matched to the atom scale,
// with weight 2^(-2(j+k)) (so a constant integrand contributes 8x its value,
// the volume factor of the box).
ScalarField3 S_zd(const ScalarField3& f, const BumpPair& bumps, const JkSet& jks);

// Per-shell convolution, exposed for the Calderon machinery.
ScalarField3 shell_convolve(const ScalarField3& f, const std::vector<double>& multiplier);

// Log-spaced quadrature grid with the given density.
std::vector<double> log_grid(double lo, double hi, int points_per_decade);

struct ContinuousLPConfig {
  std::vector<double> s_grid;
  std::vector<double> t_grid;
  int points_per_decade = 16;  // used by the default-grid helper
};

// Quadrature grids covering the scales of a jk set with half-an-octave margin.
ContinuousLPConfig default_continuous_config(const JkSet& jks, int points_per_decade = 16);

// Continuous square function with the integral normalization int |phi^(s
// xi)|^2 ds/s computed numerically from the profile and divided out.
ScalarField3 g_z_continuous(const ScalarField3& f, const BumpPair& bumps,
                            const ContinuousLPConfig& cfg);

// Cone-averaged version: slice boxes (s, s, st), measure dy ds dt / (s^3 t^3).
ScalarField3 S_z_continuous(const ScalarField3& f, const BumpPair& bumps,
                            const ContinuousLPConfig& cfg);

// Numerical value of int_0^infty psi_hat(s)^2 ds/s for a profile (equals the
// continuous normalization constant; log2 of it is the shell overlap).
double continuous_normalization(const DyadicProfile& profile, int points_per_decade = 256);

// Average of field over the box with half-widths w centered at each node
// (cell-counting, times cell volume): returns the un-normalized integral.
ScalarField3 box_integral(const ScalarField3& field, const point3& half_widths);
// Number of grid offsets inside the box (the discrete slice volume is this
// count times cell volume).
std::int64_t box_node_count(const Grid3& grid, const point3& half_widths);

struct AlmostOrthProbe {
  int j_center = 0;
  int k_center = 0;
  int max_offset = 2;      // probes (j,k) and (j',k') within this offset
  BumpTriple profile{};    // spatially compact mean-zero probe bumps
};

// sup_x |p_{j,k} * K * p_{j',k'}| over the (j,k,j',k') lattice, regressed
// against the combined offset |j-j'| + |k-k'|. Spatially supported mean-zero
// probe atoms are used: band-limited frame atoms at offset >= 2 have disjoint
// spectra and give exact zeros, which carry no slope information.
ExperimentReport almost_orthogonality_probe(const KernelSpec& spec, const Grid3& grid,
                                            const AlmostOrthProbe& probe);

}  // namespace zyg
