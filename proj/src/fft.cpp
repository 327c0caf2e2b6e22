#include "zyg/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace zyg {
namespace fft {
namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// FFTW planning is not thread safe; execution with the new-array interface is.
std::mutex plan_mutex;
std::map<index3, PlanPair>& plan_cache() {
  static std::map<index3, PlanPair> cache;
  return cache;
}

PlanPair& plans_for(const Grid3& grid) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(grid.counts());
  if (it != cache.end()) return it->second;

  const auto n = grid.counts();
  std::vector<std::complex<double>> scratch(grid.size());
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  PlanPair pair;
  pair.fwd = fftw_plan_dft_3d(int(n[0]), int(n[1]), int(n[2]), p, p, FFTW_FORWARD,
                              FFTW_ESTIMATE);
  pair.bwd = fftw_plan_dft_3d(int(n[0]), int(n[1]), int(n[2]), p, p, FFTW_BACKWARD,
                              FFTW_ESTIMATE);
  return cache.emplace(grid.counts(), pair).first->second;
}

std::vector<std::complex<double>> run(const Grid3& grid,
                                      const std::vector<std::complex<double>>& in,
                                      bool forward_dir) {
  auto& pair = plans_for(grid);
  std::vector<std::complex<double>> buf(in);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(forward_dir ? pair.fwd : pair.bwd, p, p);
  if (!forward_dir) {
    const double s = 1.0 / double(grid.size());
    for (auto& v : buf) v *= s;
  }
  return buf;
}

}  // namespace

std::vector<std::complex<double>> forward(const Grid3& grid,
                                          const std::vector<std::complex<double>>& in) {
  return run(grid, in, true);
}

std::vector<std::complex<double>> inverse(const Grid3& grid,
                                          const std::vector<std::complex<double>>& in) {
  return run(grid, in, false);
}

std::vector<std::complex<double>> forward_real(const Grid3& grid,
                                               const std::vector<double>& in) {
  std::vector<std::complex<double>> buf(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) buf[i] = in[i];
  return run(grid, buf, true);
}

std::vector<double> inverse_to_real(const Grid3& grid,
                                    const std::vector<std::complex<double>>& in) {
  auto full = run(grid, in, false);
  std::vector<double> out(full.size());
  for (std::size_t i = 0; i < full.size(); ++i) out[i] = full[i].real();
  return out;
}

}  // namespace fft
}  // namespace zyg
