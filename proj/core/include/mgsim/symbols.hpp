#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mgsim/grid.hpp"

namespace mgsim::velocity {

/// Physical parameters of the magnetogeostrophic operator. Only the ratio β²/η
/// enters the symbols.
struct MgParams {
  double omega = 0.5;           ///< rotation rate Ω
  double beta2_over_eta = 1.0;  ///< β²/η

  void validate() const;
};

enum class SymbolKind { mg, perp_riesz, custom, zero };

std::string to_string(SymbolKind kind);

/// Fourier multiplier θ ↦ u, tabulated on the full spectrum in FFT index order
/// (row-major, index i ↦ k = i or i - N). Each mode carries d complex values.
class MultiplierSymbol {
 public:
  MultiplierSymbol(Grid grid, SymbolKind kind, std::vector<Complex> table);

  const Grid& grid() const noexcept { return grid_; }
  SymbolKind kind() const noexcept { return kind_; }
  int riesz_axis() const noexcept { return riesz_axis_; }
  const std::optional<MgParams>& mg_params() const noexcept { return mg_; }

  /// M̂_j(k) for any in-range wavenumber k.
  Complex at(const IVec& k, int j) const noexcept { return table_[full_index(k) * grid_.dim() + j]; }
  std::span<const Complex> table() const noexcept { return table_; }
  std::size_t full_index(const IVec& k) const noexcept;

  /// max over k of |k·M̂(k)| / ((1 + |k|) max_j |M̂_j(k)|), 0 where M̂ = 0.
  double divergence_defect() const noexcept;
  /// max over k of |M̂_j(-k) - conj M̂_j(k)| / (max|M̂| over the table).
  double reality_defect() const noexcept;

 private:
  friend MultiplierSymbol mg_symbol(const MgParams&, const Grid&);
  friend MultiplierSymbol perp_riesz_symbol(int, const Grid&);

  Grid grid_;
  SymbolKind kind_;
  std::vector<Complex> table_;
  std::optional<MgParams> mg_;
  int riesz_axis_ = 0;
};

/// d×d matrix symbol T̂_ij(k) = -(i k_i / |k|²) M̂_j(k), T̂(0) = 0.
class TijSymbol {
 public:
  TijSymbol(Grid grid, std::vector<Complex> table);

  const Grid& grid() const noexcept { return grid_; }
  Complex at(const IVec& k, int i, int j) const noexcept;
  std::span<const Complex> table() const noexcept { return table_; }

  /// sup_k max_ij |T̂_ij(k)|.
  double sup_norm() const noexcept;

 private:
  Grid grid_;
  std::vector<Complex> table_;
};

/// Evaluate the MG symbol at an arbitrary (possibly off-grid) wavenumber,
/// including the k₃ = 0 convention.
std::array<double, 3> mg_symbol_at(const MgParams& p, const IVec& k);

MultiplierSymbol mg_symbol(const MgParams& params, const Grid& grid);
/// u = ∇⊥ R_axis θ in 2-d: M̂₁ = -i k₂ T̂, M̂₂ = i k₁ T̂ with T̂ = i k_axis/|k|.
MultiplierSymbol perp_riesz_symbol(int axis, const Grid& grid);
/// All-zero table (pure diffusion).
MultiplierSymbol zero_symbol(const Grid& grid);
/// User-supplied table; rejected with std::invalid_argument unless it is
/// divergence free and real (M̂(-k) = conj M̂(k)) to `tol`.
MultiplierSymbol custom_symbol(const Grid& grid, std::vector<Complex> table, double tol = 1e-12);

TijSymbol tij_from_symbol(const MultiplierSymbol& m);

/// max over k ≠ 0 and j of |Σ_i (i k_i) T̂_ij(k) - M̂_j(k)|, relative to
/// max_j |M̂_j(k)| at that mode.
double tij_reconstruction_defect(const MultiplierSymbol& m, const TijSymbol& t);

/// û_j = M̂_j θ̂, j = 1..d.
std::vector<SpectralField> apply_velocity(const MultiplierSymbol& m, const SpectralField& theta_hat);

/// sup over grid modes k ≠ 0 of max_j |M̂_j(k)| / |k|.
double measure_growth_constant(const MultiplierSymbol& m);

struct CurvedRegionRow {
  int k1 = 0;
  int k2 = 0;
  int k3 = 1;
  double abs_m1 = 0.0;
  double abs_m2 = 0.0;
  double abs_m3 = 0.0;
  double m2_over_k1 = 0.0;
};

/// Evaluate |M̂_j| along k = (k₁, round(k₁^σ), 1), σ ∈ (0, 1/2], k₁ ≥ 4.
std::vector<CurvedRegionRow> curved_region_scan(const MultiplierSymbol& m, double sigma,
                                                std::span<const int> k1_list);

}  // namespace mgsim::velocity
