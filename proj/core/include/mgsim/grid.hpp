#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <new>
#include <span>
#include <vector>

namespace mgsim {

inline constexpr int kMaxDim = 3;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Integer d-vector (wavenumber or grid multi-index); entries past dim() are 0.
using IVec = std::array<int, kMaxDim>;
/// Real d-vector; entries past dim() are 0.
using RVec = std::array<double, kMaxDim>;

using Complex = std::complex<double>;

/// 64-byte aligned allocator so field storage can be handed to SIMD FFT kernels.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlign{64};

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), kAlign)); }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlign); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

/// Uniform grid on the 2π-periodic d-torus, d ∈ {2, 3}.
///
/// Physical samples are stored row-major with the last axis fastest. Spectral
/// coefficients use the real-to-complex half layout: all wavenumbers on the
/// leading axes and 0..N/2 on the last axis. Wavenumbers per axis are the
/// integers {-N/2+1, ..., N/2}; index i maps to k = i for i <= N/2, else i - N.
class Grid {
 public:
  Grid(std::initializer_list<int> dims);
  explicit Grid(std::span<const int> dims);

  int dim() const noexcept { return d_; }
  int n(int axis) const noexcept { return dims_[axis]; }
  std::span<const int> dims() const noexcept { return {dims_.data(), static_cast<std::size_t>(d_)}; }

  std::size_t size() const noexcept { return size_; }
  std::size_t spectral_size() const noexcept { return spectral_size_; }
  /// Number of stored last-axis modes (N_last/2 + 1).
  int half_last() const noexcept { return dims_[d_ - 1] / 2 + 1; }

  double spacing(int axis) const noexcept { return kTwoPi / dims_[axis]; }
  double min_spacing() const noexcept;
  double cell_volume() const noexcept;
  double volume() const noexcept;

  int wavenumber(int axis, int index) const noexcept {
    return index <= dims_[axis] / 2 ? index : index - dims_[axis];
  }
  int index_of(int axis, int k) const noexcept {
    const int n = dims_[axis];
    return ((k % n) + n) % n;
  }

  /// Flat physical index -> multi-index.
  IVec unflatten(std::size_t flat) const noexcept;
  std::size_t flatten(const IVec& idx) const noexcept;
  RVec position(std::size_t flat) const noexcept;

  bool operator==(const Grid&) const = default;

 private:
  void init();

  int d_ = 0;
  std::array<int, kMaxDim> dims_{1, 1, 1};
  std::size_t size_ = 0;
  std::size_t spectral_size_ = 0;
};

/// Visit every stored half-spectrum mode as f(slot, k, weight). `weight` is the
/// multiplicity of the slot in the full spectrum (1 on the last-axis 0 and
/// Nyquist planes, 2 elsewhere), so Σ weight·|c|² is the full-spectrum sum.
template <class F>
void for_each_mode(const Grid& g, F&& f) {
  const int d = g.dim();
  const int nl = g.n(d - 1);
  const int hl = g.half_last();
  std::size_t slot = 0;
  IVec k{0, 0, 0};
  const int n0 = g.n(0);
  const int n1 = d == 3 ? g.n(1) : 1;
  for (int i0 = 0; i0 < n0; ++i0) {
    k[0] = g.wavenumber(0, i0);
    for (int i1 = 0; i1 < n1; ++i1) {
      if (d == 3) k[1] = g.wavenumber(1, i1);
      for (int j = 0; j < hl; ++j, ++slot) {
        k[d - 1] = j;
        const double w = (j == 0 || 2 * j == nl) ? 1.0 : 2.0;
        f(slot, static_cast<const IVec&>(k), w);
      }
    }
  }
}

inline double norm2(const IVec& k) noexcept {
  return double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
}

/// Real samples of a scalar on the grid.
class PhysicalField {
 public:
  explicit PhysicalField(Grid grid);
  PhysicalField(Grid grid, AlignedVector<double> values);
  PhysicalField(Grid grid, std::span<const double> values);

  template <class F>
  static PhysicalField from_function(const Grid& g, F&& f) {
    PhysicalField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out.values_[i] = f(g.position(i));
    return out;
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  bool all_finite() const noexcept;
  double max() const noexcept;
  double min() const noexcept;

 private:
  Grid grid_;
  AlignedVector<double> values_;
};

/// Fourier coefficients c_k = N⁻¹ Σ_x f(x) e^{-ik·x} of a real field, half layout.
class SpectralField {
 public:
  explicit SpectralField(Grid grid);
  SpectralField(Grid grid, AlignedVector<Complex> coeffs);

  const Grid& grid() const noexcept { return grid_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  Complex* data() noexcept { return coeffs_.data(); }
  const Complex* data() const noexcept { return coeffs_.data(); }
  Complex& operator[](std::size_t i) noexcept { return coeffs_[i]; }
  Complex operator[](std::size_t i) const noexcept { return coeffs_[i]; }

  /// Coefficient for any wavenumber in the grid range, using c(-k) = conj c(k)
  /// for modes outside the stored half.
  Complex coeff(const IVec& k) const noexcept;
  /// Stored slot for k; only valid when the last component is in [0, N/2].
  std::size_t slot(const IVec& k) const noexcept;
  void set_coeff(const IVec& k, Complex value) noexcept;

  /// max |c(-k) - conj c(k)| / max|c| over the self-paired planes.
  double hermitian_defect() const noexcept;

 private:
  Grid grid_;
  AlignedVector<Complex> coeffs_;
};

}  // namespace mgsim
