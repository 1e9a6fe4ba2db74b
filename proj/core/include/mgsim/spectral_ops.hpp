#pragma once

#include <vector>

#include "mgsim/grid.hpp"

namespace mgsim::spectral {

/// Spectral partial derivatives ∂_j f ↔ i k_j f̂, one field per axis. The
/// Nyquist coefficient along the differentiated axis is set to zero so every
/// component stays Hermitian.
std::vector<SpectralField> gradient(const SpectralField& f);

/// Multiplier -|k|².
SpectralField laplacian(const SpectralField& f);

/// 2/3 rule: zero every mode with some |k_i| > N_i/3.
SpectralField dealias(const SpectralField& f);
void dealias_in_place(SpectralField& f) noexcept;
bool is_dealiased(const Grid& g, const IVec& k) noexcept;

/// Zero the k₃ = 0 plane (zero vertical mean). Requires d = 3.
SpectralField project_zero_vertical_mean(const SpectralField& f);
void project_zero_vertical_mean_in_place(SpectralField& f);

/// Pointwise (f - h)₊.
PhysicalField truncate_plus(const PhysicalField& f, double h);

// Norms on the torus with its natural measure (volume (2π)^d).
double l2_norm_sq(const PhysicalField& f) noexcept;
double l2_norm_sq(const SpectralField& f) noexcept;  // Parseval
double linf_norm(const PhysicalField& f) noexcept;
/// ‖Λ^s f‖₂² = (2π)^d Σ |k|^{2s} |f̂_k|².
double homogeneous_sobolev_sq(const SpectralField& f, double s) noexcept;
/// Real L² inner product ⟨f, g⟩ via Parseval.
double inner_product(const SpectralField& f, const SpectralField& g);

}  // namespace mgsim::spectral
