#include "mgsim/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgsim::spectral {

std::vector<SpectralField> gradient(const SpectralField& f) {
  const Grid& g = f.grid();
  const int d = g.dim();
  std::vector<SpectralField> out(d, SpectralField(g));
  for_each_mode(g, [&](std::size_t s, const IVec& k, double) {
    const Complex c = f[s];
    for (int a = 0; a < d; ++a) {
      const bool nyquist = 2 * k[a] == g.n(a);
      out[a][s] = nyquist ? Complex{} : Complex(0.0, k[a]) * c;
    }
  });
  return out;
}

SpectralField laplacian(const SpectralField& f) {
  SpectralField out(f.grid());
  for_each_mode(f.grid(), [&](std::size_t s, const IVec& k, double) { out[s] = -norm2(k) * f[s]; });
  return out;
}

bool is_dealiased(const Grid& g, const IVec& k) noexcept {
  for (int a = 0; a < g.dim(); ++a)
    if (3 * std::abs(k[a]) > g.n(a)) return false;
  return true;
}

void dealias_in_place(SpectralField& f) noexcept {
  const Grid& g = f.grid();
  for_each_mode(g, [&](std::size_t s, const IVec& k, double) {
    if (!is_dealiased(g, k)) f[s] = Complex{};
  });
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  dealias_in_place(out);
  return out;
}

void project_zero_vertical_mean_in_place(SpectralField& f) {
  const Grid& g = f.grid();
  if (g.dim() != 3) throw std::invalid_argument("project_zero_vertical_mean requires a 3-d grid");
  const std::size_t hl = static_cast<std::size_t>(g.half_last());
  for (std::size_t s = 0; s < g.spectral_size(); s += hl) f[s] = Complex{};
}

SpectralField project_zero_vertical_mean(const SpectralField& f) {
  SpectralField out = f;
  project_zero_vertical_mean_in_place(out);
  return out;
}

PhysicalField truncate_plus(const PhysicalField& f, double h) {
  PhysicalField out(f.grid());
  auto src = f.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::max(src[i] - h, 0.0);
  return out;
}

double l2_norm_sq(const PhysicalField& f) noexcept {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return s * f.grid().cell_volume();
}

double l2_norm_sq(const SpectralField& f) noexcept {
  double s = 0.0;
  for_each_mode(f.grid(), [&](std::size_t i, const IVec&, double w) { s += w * std::norm(f[i]); });
  return s * f.grid().volume();
}

double linf_norm(const PhysicalField& f) noexcept {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double homogeneous_sobolev_sq(const SpectralField& f, double s) noexcept {
  double acc = 0.0;
  for_each_mode(f.grid(), [&](std::size_t i, const IVec& k, double w) {
    const double k2 = norm2(k);
    if (k2 == 0.0) return;
    acc += w * std::pow(k2, s) * std::norm(f[i]);
  });
  return acc * f.grid().volume();
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("inner_product: grid mismatch");
  double acc = 0.0;
  for_each_mode(f.grid(), [&](std::size_t i, const IVec&, double w) {
    acc += w * (std::conj(f[i]) * g[i]).real();
  });
  return acc * f.grid().volume();
}

}  // namespace mgsim::spectral
