#pragma once

#include <cstdint>
#include <random>

#include "zyg/field.hpp"

namespace zyg {

// All randomness in the project flows through seeded mt19937_64 streams so a
// config seed fully determines every draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {  // inclusive
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  double sign() { return integer(0, 1) ? 1.0 : -1.0; }

  // Child stream with a decorrelated seed; lets batches draw independently in
  // a deterministic order.
  Rng fork(std::uint64_t salt) {
    return Rng(eng_() ^ (0x9e3779b97f4a7c15ull * (salt + 1)));
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline ScalarField3 random_field(const Grid3& grid, Rng& rng) {
  std::vector<double> v(grid.size());
  for (auto& x : v) x = rng.normal();
  return ScalarField3(grid, std::move(v));
}

}  // namespace zyg
