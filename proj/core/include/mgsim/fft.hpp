#pragma once

#include "mgsim/grid.hpp"

namespace mgsim::spectral {

/// Real-to-spectral transform, normalised so a constant c maps to c_0 = c.
/// Throws NumericalError on non-finite input.
SpectralField forward_transform(const PhysicalField& f);

/// Exact inverse of forward_transform (up to rounding).
PhysicalField inverse_transform(const SpectralField& f);

}  // namespace mgsim::spectral
