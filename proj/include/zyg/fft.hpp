#pragma once

#include <complex>
#include <vector>

#include "zyg/grid.hpp"

namespace zyg {

// Complex 3-D FFT on the grid's index lattice.
// Normalization is fixed once for the whole project: forward is the plain
// unscaled sum, inverse carries the 1/N factor, so inverse(forward(x)) == x.
// Plans are cached per shape (FFTW_ESTIMATE, so planning is deterministic and
// repeated runs are bit-identical).
namespace fft {

std::vector<std::complex<double>> forward(const Grid3& grid,
                                          const std::vector<std::complex<double>>& in);
std::vector<std::complex<double>> inverse(const Grid3& grid,
                                          const std::vector<std::complex<double>>& in);

std::vector<std::complex<double>> forward_real(const Grid3& grid,
                                               const std::vector<double>& in);
// Inverse transform of a spectrum known to come from real data; discards the
// imaginary residue (callers may check it first).
std::vector<double> inverse_to_real(const Grid3& grid,
                                    const std::vector<std::complex<double>>& in);

}  // namespace fft
}  // namespace zyg
