#pragma once

#include <optional>

#include "zyg/field.hpp"
#include "zyg/geometry.hpp"

namespace zyg {

// Periodic convolution with Riemann measure: cellvol * IFFT(FFT(f).FFT(g)).
// On an origin-0 grid this is exactly (f*g)(x) = integral f(y) g(x-y) dy
// sampled at the nodes; for other origins it is the same circular convolution
// on the index lattice.
ScalarField3 fft_convolve(const ScalarField3& f, const ScalarField3& g);

// (sum |f|^p w cellvol)^(1/p); w absent means w == 1.
double lp_norm(const ScalarField3& f, double p,
               const std::optional<ScalarField3>& w = std::nullopt);

double l2_norm(const ScalarField3& f);
double inner(const ScalarField3& f, const ScalarField3& g);

// Midpoint-rule integral; full box when region is absent. Nodes are cell
// centers, so regions whose edges sit on cell boundaries integrate exactly.
double integrate(const ScalarField3& f,
                 const std::optional<ZygmundRectangle>& region = std::nullopt);

double mean(const ScalarField3& f, const ZygmundRectangle& region);

// Forward/inverse transforms with the continuous-coefficient scaling
// (coeffs = cellvol * DFT), so Parseval reads
// ||f||_2^2 = (1/V) sum |coeff|^2.
SpectralField3 analyze(const ScalarField3& f);
ScalarField3 synthesize(const SpectralField3& s);

}  // namespace zyg
