#pragma once

#include <stdexcept>
#include <string>

namespace zyg {

struct zyg_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two fields do not share a grid, or an operator was fed the wrong shape.
struct dimension_error : zyg_error {
  using zyg_error::zyg_error;
};

// Degenerate rectangle, non-divisible lattice scale, box overflow.
struct geometry_error : zyg_error {
  using zyg_error::zyg_error;
};

// Out-of-range scalar argument (p < 1, s <= 0, empty range, ...).
struct parameter_error : zyg_error {
  using zyg_error::zyg_error;
};

// Nonpositive weight sample where positivity is required.
struct weight_error : zyg_error {
  using zyg_error::zyg_error;
};

// Non-finite samples or an identity that failed to hold to roundoff.
struct data_error : zyg_error {
  using zyg_error::zyg_error;
};

// Grid too coarse for the requested scale (kernel truncation, atom band).
struct resolution_error : zyg_error {
  using zyg_error::zyg_error;
};

// Malformed kernel / experiment configuration.
struct config_error : zyg_error {
  using zyg_error::zyg_error;
};

}  // namespace zyg
