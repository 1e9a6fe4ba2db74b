#pragma once

#include <cstdint>
#include <span>

#include "mgsim/grid.hpp"

namespace mgsim::io {

struct RandomBandlimited {
  int k_min = 1;
  int k_max = 4;
  double amplitude = 1.0;
  std::uint64_t seed = 0;
};

/// Modes with k_min <= |k| <= k_max and unit-normal complex amplitudes drawn
/// from a counter-based generator keyed on (seed, k). The coefficient of a
/// given k does not depend on the grid size, so the same seed describes the
/// same function at every resolution with N/3 >= k_max. `zero_vertical_mean`
/// drops the last-axis k = 0 plane.
PhysicalField random_bandlimited(const Grid& grid, const RandomBandlimited& p, bool zero_vertical_mean);

/// One term a·cos(k·x + φ).
struct ModeSpec {
  IVec k{0, 0, 0};
  double amplitude = 1.0;
  double phase = 0.0;
};

PhysicalField modes_field(const Grid& grid, std::span<const ModeSpec> modes);

/// splitmix64 finaliser; exposed for tests.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace mgsim::io
