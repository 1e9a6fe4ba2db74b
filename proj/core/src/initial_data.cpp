#include "mgsim/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mgsim/fft.hpp"

namespace mgsim::io {
namespace {

std::uint64_t key_of(const IVec& k) noexcept {
  std::uint64_t key = 0;
  for (int a = 0; a < kMaxDim; ++a) key = (key << 21) | static_cast<std::uint64_t>(k[a] + (1 << 20));
  return key;
}

double unit_uniform(std::uint64_t bits) noexcept { return double(bits >> 11) * 0x1.0p-53; }

// Only one of ±k is visited: the first nonzero component must be positive.
bool canonical(const IVec& k, int d) noexcept {
  for (int a = 0; a < d; ++a) {
    if (k[a] > 0) return true;
    if (k[a] < 0) return false;
  }
  return false;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

PhysicalField random_bandlimited(const Grid& grid, const RandomBandlimited& p, bool zero_vertical_mean) {
  const int d = grid.dim();
  if (p.k_min < 1 || p.k_max < p.k_min) throw std::invalid_argument("random_bandlimited: need 1 <= k_min <= k_max");
  for (int a = 0; a < d; ++a)
    if (3 * p.k_max > grid.n(a)) throw std::invalid_argument("random_bandlimited: k_max exceeds N/3");
  if (zero_vertical_mean && d != 3) throw std::invalid_argument("random_bandlimited: vertical mean needs d = 3");

  SpectralField hat(grid);
  const int km = p.k_max;
  const double lo2 = double(p.k_min) * p.k_min;
  const double hi2 = double(km) * km;
  IVec k{0, 0, 0};
  for (k[0] = -km; k[0] <= km; ++k[0])
    for (k[1] = -km; k[1] <= km; ++k[1])
      for (k[2] = d == 3 ? -km : 0; k[2] <= (d == 3 ? km : 0); ++k[2]) {
        const double n2 = norm2(k);
        if (n2 < lo2 || n2 > hi2 || !canonical(k, d)) continue;
        if (zero_vertical_mean && k[d - 1] == 0) continue;
        const std::uint64_t h = mix64(p.seed ^ mix64(key_of(k)));
        const double u1 = unit_uniform(mix64(h));
        const double u2 = unit_uniform(mix64(h + 1));
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        const Complex c = 0.5 * p.amplitude * Complex(r * std::cos(ang), r * std::sin(ang));
        if (k[d - 1] >= 0) {
          hat.set_coeff(k, c);
        } else {
          IVec mk{-k[0], -k[1], -k[2]};
          hat.set_coeff(mk, std::conj(c));
        }
      }
  return spectral::inverse_transform(hat);
}

PhysicalField modes_field(const Grid& grid, std::span<const ModeSpec> modes) {
  const int d = grid.dim();
  return PhysicalField::from_function(grid, [&](const RVec& x) {
    double v = 0.0;
    for (const auto& m : modes) {
      double phase = m.phase;
      for (int a = 0; a < d; ++a) phase += m.k[a] * x[a];
      v += m.amplitude * std::cos(phase);
    }
    return v;
  });
}

}  // namespace mgsim::io
