#include "mgsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mgsim/errors.hpp"

namespace mgsim {

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration";
        for (const auto& v : violations) msg += "; " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

Grid::Grid(std::initializer_list<int> dims) : Grid(std::span<const int>(dims.begin(), dims.size())) {}

Grid::Grid(std::span<const int> dims) {
  if (dims.size() < 2 || dims.size() > 3)
    throw std::invalid_argument("grid dimension must be 2 or 3, got " + std::to_string(dims.size()));
  d_ = static_cast<int>(dims.size());
  for (int a = 0; a < d_; ++a) {
    const int n = dims[a];
    if (n < 8 || n % 2 != 0)
      throw std::invalid_argument("grid axis " + std::to_string(a) + " has " + std::to_string(n) +
                                  " points; need an even count >= 8");
    dims_[a] = n;
  }
  init();
}

void Grid::init() {
  size_ = 1;
  for (int a = 0; a < d_; ++a) size_ *= static_cast<std::size_t>(dims_[a]);
  spectral_size_ = size_ / dims_[d_ - 1] * static_cast<std::size_t>(half_last());
}

double Grid::min_spacing() const noexcept {
  double h = spacing(0);
  for (int a = 1; a < d_; ++a) h = std::min(h, spacing(a));
  return h;
}

double Grid::cell_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < d_; ++a) v *= spacing(a);
  return v;
}

double Grid::volume() const noexcept { return std::pow(kTwoPi, d_); }

IVec Grid::unflatten(std::size_t flat) const noexcept {
  IVec idx{0, 0, 0};
  for (int a = d_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % dims_[a]);
    flat /= dims_[a];
  }
  return idx;
}

std::size_t Grid::flatten(const IVec& idx) const noexcept {
  std::size_t flat = 0;
  for (int a = 0; a < d_; ++a) flat = flat * dims_[a] + static_cast<std::size_t>(idx[a]);
  return flat;
}

RVec Grid::position(std::size_t flat) const noexcept {
  const IVec idx = unflatten(flat);
  RVec x{0.0, 0.0, 0.0};
  for (int a = 0; a < d_; ++a) x[a] = idx[a] * spacing(a);
  return x;
}

// ---------------------------------------------------------------------------

PhysicalField::PhysicalField(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

PhysicalField::PhysicalField(Grid grid, AlignedVector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("field has " + std::to_string(values_.size()) + " values, grid needs " +
                                std::to_string(grid_.size()));
}

PhysicalField::PhysicalField(Grid grid, std::span<const double> values)
    : PhysicalField(std::move(grid), AlignedVector<double>(values.begin(), values.end())) {}

bool PhysicalField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double PhysicalField::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }
double PhysicalField::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

// ---------------------------------------------------------------------------

SpectralField::SpectralField(Grid grid) : grid_(std::move(grid)), coeffs_(grid_.spectral_size()) {}

SpectralField::SpectralField(Grid grid, AlignedVector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.spectral_size())
    throw std::invalid_argument("spectral field size does not match grid");
}

std::size_t SpectralField::slot(const IVec& k) const noexcept {
  const int d = grid_.dim();
  std::size_t s = 0;
  for (int a = 0; a + 1 < d; ++a) s = s * grid_.n(a) + static_cast<std::size_t>(grid_.index_of(a, k[a]));
  return s * grid_.half_last() + static_cast<std::size_t>(grid_.index_of(d - 1, k[d - 1]));
}

namespace {
IVec negate(const Grid& g, const IVec& k) {
  IVec m{0, 0, 0};
  for (int a = 0; a < g.dim(); ++a) m[a] = g.wavenumber(a, g.index_of(a, -k[a]));
  return m;
}
}  // namespace

Complex SpectralField::coeff(const IVec& k) const noexcept {
  const int d = grid_.dim();
  const int last = grid_.wavenumber(d - 1, grid_.index_of(d - 1, k[d - 1]));
  if (last >= 0) return coeffs_[slot(k)];
  return std::conj(coeffs_[slot(negate(grid_, k))]);
}

void SpectralField::set_coeff(const IVec& k, Complex value) noexcept {
  const int d = grid_.dim();
  const int last = grid_.wavenumber(d - 1, grid_.index_of(d - 1, k[d - 1]));
  const IVec mk = negate(grid_, k);
  if (last < 0) {
    coeffs_[slot(mk)] = std::conj(value);
    return;
  }
  const std::size_t s = slot(k);
  const std::size_t sm = slot(mk);
  if (2 * last == grid_.n(d - 1) || last == 0) {
    // Self-paired plane: keep c(-k) = conj c(k); self-conjugate slots are real.
    if (s == sm) {
      coeffs_[s] = Complex(value.real(), 0.0);
    } else {
      coeffs_[s] = value;
      coeffs_[sm] = std::conj(value);
    }
  } else {
    coeffs_[s] = value;
  }
}

double SpectralField::hermitian_defect() const noexcept {
  double scale = 0.0;
  for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  const int d = grid_.dim();
  const int nl = grid_.n(d - 1);
  double defect = 0.0;
  for_each_mode(grid_, [&](std::size_t s, const IVec& k, double) {
    if (k[d - 1] != 0 && 2 * k[d - 1] != nl) return;
    const Complex other = coeffs_[slot(negate(grid_, k))];
    defect = std::max(defect, std::abs(other - std::conj(coeffs_[s])));
  });
  return defect / scale;
}

}  // namespace mgsim
