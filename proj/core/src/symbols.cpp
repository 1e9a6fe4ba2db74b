#include "mgsim/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgsim::velocity {
namespace {

constexpr Complex kI{0.0, 1.0};

// Visit every full-spectrum mode in FFT index order.
template <class F>
void for_each_full_mode(const Grid& g, F&& f) {
  const int d = g.dim();
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    IVec idx = g.unflatten(flat);
    IVec k{0, 0, 0};
    for (int a = 0; a < d; ++a) k[a] = g.wavenumber(a, idx[a]);
    f(flat, static_cast<const IVec&>(k));
  }
}

bool on_nyquist(const Grid& g, const IVec& k) {
  for (int a = 0; a < g.dim(); ++a)
    if (2 * k[a] == g.n(a)) return true;
  return false;
}

IVec negated(const Grid& g, const IVec& k) {
  IVec m{0, 0, 0};
  for (int a = 0; a < g.dim(); ++a) m[a] = g.wavenumber(a, g.index_of(a, -k[a]));
  return m;
}

}  // namespace

void MgParams::validate() const {
  if (!(std::isfinite(omega) && omega > 0.0)) throw std::invalid_argument("MgParams: omega must be finite and > 0");
  if (!(std::isfinite(beta2_over_eta) && beta2_over_eta > 0.0))
    throw std::invalid_argument("MgParams: beta2_over_eta must be finite and > 0");
}

std::string to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::mg: return "mg";
    case SymbolKind::perp_riesz: return "perp_riesz";
    case SymbolKind::custom: return "custom";
    case SymbolKind::zero: return "zero";
  }
  return "unknown";
}

MultiplierSymbol::MultiplierSymbol(Grid grid, SymbolKind kind, std::vector<Complex> table)
    : grid_(std::move(grid)), kind_(kind), table_(std::move(table)) {
  if (table_.size() != grid_.size() * static_cast<std::size_t>(grid_.dim()))
    throw std::invalid_argument("symbol table size does not match grid");
}

std::size_t MultiplierSymbol::full_index(const IVec& k) const noexcept {
  std::size_t flat = 0;
  for (int a = 0; a < grid_.dim(); ++a) flat = flat * grid_.n(a) + static_cast<std::size_t>(grid_.index_of(a, k[a]));
  return flat;
}

double MultiplierSymbol::divergence_defect() const noexcept {
  const int d = grid_.dim();
  double worst = 0.0;
  for_each_full_mode(grid_, [&](std::size_t flat, const IVec& k) {
    Complex div{};
    double mx = 0.0;
    for (int j = 0; j < d; ++j) {
      const Complex m = table_[flat * d + j];
      div += static_cast<double>(k[j]) * m;
      mx = std::max(mx, std::abs(m));
    }
    if (mx == 0.0) return;
    worst = std::max(worst, std::abs(div) / ((1.0 + std::sqrt(norm2(k))) * mx));
  });
  return worst;
}

double MultiplierSymbol::reality_defect() const noexcept {
  const int d = grid_.dim();
  double scale = 0.0;
  for (const auto& m : table_) scale = std::max(scale, std::abs(m));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  // ±N/2 share one grid slot, so M̂(-k) = conj M̂(k) is only checkable off the Nyquist planes.
  for_each_full_mode(grid_, [&](std::size_t flat, const IVec& k) {
    if (on_nyquist(grid_, k)) return;
    const std::size_t other = full_index(negated(grid_, k));
    for (int j = 0; j < d; ++j)
      worst = std::max(worst, std::abs(table_[other * d + j] - std::conj(table_[flat * d + j])));
  });
  return worst / scale;
}

// ---------------------------------------------------------------------------

TijSymbol::TijSymbol(Grid grid, std::vector<Complex> table) : grid_(std::move(grid)), table_(std::move(table)) {
  const auto d = static_cast<std::size_t>(grid_.dim());
  if (table_.size() != grid_.size() * d * d) throw std::invalid_argument("T_ij table size does not match grid");
}

Complex TijSymbol::at(const IVec& k, int i, int j) const noexcept {
  const int d = grid_.dim();
  std::size_t flat = 0;
  for (int a = 0; a < d; ++a) flat = flat * grid_.n(a) + static_cast<std::size_t>(grid_.index_of(a, k[a]));
  return table_[(flat * d + i) * d + j];
}

double TijSymbol::sup_norm() const noexcept {
  double s = 0.0;
  for (const auto& t : table_) s = std::max(s, std::abs(t));
  return s;
}

// ---------------------------------------------------------------------------

std::array<double, 3> mg_symbol_at(const MgParams& p, const IVec& k) {
  const double k1 = k[0], k2 = k[1];
  // k₃ = 0: M̂₁ = M̂₂ = 0 and M̂₃ takes its k₃ = 1 value.
  const bool plane = k[2] == 0;
  const double k3 = plane ? 1.0 : static_cast<double>(k[2]);
  const double w = 2.0 * p.omega;
  const double b = p.beta2_over_eta;
  const double kk = k1 * k1 + k2 * k2 + k3 * k3;
  const double k2sq = k2 * k2;
  const double denom = w * w * k3 * k3 * kk + b * b * k2sq * k2sq;
  const double m3 = b * k2sq * (k1 * k1 + k2sq) / denom;
  if (plane) return {0.0, 0.0, m3};
  const double m1 = (w * k2 * k3 * kk - b * k1 * k2sq * k3) / denom;
  const double m2 = (-w * k1 * k3 * kk - b * k2sq * k2 * k3) / denom;
  return {m1, m2, m3};
}

MultiplierSymbol mg_symbol(const MgParams& params, const Grid& grid) {
  if (grid.dim() != 3) throw std::invalid_argument("mg_symbol requires a 3-d grid");
  params.validate();
  std::vector<Complex> table(grid.size() * 3);
  for_each_full_mode(grid, [&](std::size_t flat, const IVec& k) {
    const auto m = mg_symbol_at(params, k);
    for (int j = 0; j < 3; ++j) table[flat * 3 + j] = m[j];
  });
  MultiplierSymbol out(grid, SymbolKind::mg, std::move(table));
  out.mg_ = params;
  return out;
}

MultiplierSymbol perp_riesz_symbol(int axis, const Grid& grid) {
  if (grid.dim() != 2) throw std::invalid_argument("perp_riesz_symbol requires a 2-d grid");
  if (axis != 1 && axis != 2) throw std::invalid_argument("perp_riesz axis must be 1 or 2");
  std::vector<Complex> table(grid.size() * 2);
  for_each_full_mode(grid, [&](std::size_t flat, const IVec& k) {
    const double kn = std::sqrt(norm2(k));
    if (kn == 0.0) return;
    const Complex t = kI * (static_cast<double>(k[axis - 1]) / kn);
    table[flat * 2 + 0] = -kI * static_cast<double>(k[1]) * t;
    table[flat * 2 + 1] = kI * static_cast<double>(k[0]) * t;
  });
  MultiplierSymbol out(grid, SymbolKind::perp_riesz, std::move(table));
  out.riesz_axis_ = axis;
  return out;
}

MultiplierSymbol zero_symbol(const Grid& grid) {
  return MultiplierSymbol(grid, SymbolKind::zero, std::vector<Complex>(grid.size() * grid.dim()));
}

MultiplierSymbol custom_symbol(const Grid& grid, std::vector<Complex> table, double tol) {
  for (const auto& m : table)
    if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
      throw std::invalid_argument("custom symbol: non-finite entry");
  MultiplierSymbol out(grid, SymbolKind::custom, std::move(table));
  if (const double dd = out.divergence_defect(); dd > tol)
    throw std::invalid_argument("custom symbol is not divergence free (defect " + std::to_string(dd) + ")");
  if (const double rd = out.reality_defect(); rd > tol)
    throw std::invalid_argument("custom symbol violates M(-k) = conj M(k) (defect " + std::to_string(rd) + ")");
  return out;
}

TijSymbol tij_from_symbol(const MultiplierSymbol& m) {
  const Grid& g = m.grid();
  const int d = g.dim();
  std::vector<Complex> table(g.size() * d * d);
  const auto src = m.table();
  for_each_full_mode(g, [&](std::size_t flat, const IVec& k) {
    const double k2 = norm2(k);
    if (k2 == 0.0) return;
    for (int i = 0; i < d; ++i) {
      const Complex f = -kI * (static_cast<double>(k[i]) / k2);
      for (int j = 0; j < d; ++j) table[(flat * d + i) * d + j] = f * src[flat * d + j];
    }
  });
  return TijSymbol(g, std::move(table));
}

double tij_reconstruction_defect(const MultiplierSymbol& m, const TijSymbol& t) {
  const Grid& g = m.grid();
  if (!(g == t.grid())) throw std::invalid_argument("tij_reconstruction_defect: grid mismatch");
  const int d = g.dim();
  const auto mt = m.table();
  const auto tt = t.table();
  double worst = 0.0;
  for_each_full_mode(g, [&](std::size_t flat, const IVec& k) {
    if (norm2(k) == 0.0) return;
    double scale = 0.0;
    for (int j = 0; j < d; ++j) scale = std::max(scale, std::abs(mt[flat * d + j]));
    for (int j = 0; j < d; ++j) {
      Complex r{};
      for (int i = 0; i < d; ++i) r += kI * static_cast<double>(k[i]) * tt[(flat * d + i) * d + j];
      const double err = std::abs(r - mt[flat * d + j]);
      worst = std::max(worst, scale > 0.0 ? err / scale : err);
    }
  });
  return worst;
}

std::vector<SpectralField> apply_velocity(const MultiplierSymbol& m, const SpectralField& theta_hat) {
  const Grid& g = m.grid();
  if (!(g == theta_hat.grid())) throw std::invalid_argument("apply_velocity: grid mismatch");
  const int d = g.dim();
  std::vector<SpectralField> u(d, SpectralField(g));
  const auto mt = m.table();
  for_each_mode(g, [&](std::size_t s, const IVec& k, double) {
    if (on_nyquist(g, k)) return;
    const std::size_t flat = m.full_index(k);
    const Complex th = theta_hat[s];
    for (int j = 0; j < d; ++j) u[j][s] = mt[flat * d + j] * th;
  });
  return u;
}

double measure_growth_constant(const MultiplierSymbol& m) {
  const Grid& g = m.grid();
  const int d = g.dim();
  const auto mt = m.table();
  double c = 0.0;
  for_each_full_mode(g, [&](std::size_t flat, const IVec& k) {
    const double kn = std::sqrt(norm2(k));
    if (kn == 0.0) return;
    for (int j = 0; j < d; ++j) c = std::max(c, std::abs(mt[flat * d + j]) / kn);
  });
  return c;
}

std::vector<CurvedRegionRow> curved_region_scan(const MultiplierSymbol& m, double sigma,
                                                std::span<const int> k1_list) {
  if (m.kind() != SymbolKind::mg || !m.mg_params())
    throw std::invalid_argument("curved_region_scan requires an MG symbol");
  if (!(sigma > 0.0 && sigma <= 0.5)) throw std::invalid_argument("curved_region_scan: sigma must lie in (0, 1/2]");
  std::vector<CurvedRegionRow> rows;
  rows.reserve(k1_list.size());
  for (int k1 : k1_list) {
    if (k1 < 4) throw std::invalid_argument("curved_region_scan: k1 must be >= 4");
    CurvedRegionRow row;
    row.k1 = k1;
    row.k2 = static_cast<int>(std::lround(std::pow(static_cast<double>(k1), sigma)));
    row.k3 = 1;
    const auto v = mg_symbol_at(*m.mg_params(), {row.k1, row.k2, row.k3});
    row.abs_m1 = std::abs(v[0]);
    row.abs_m2 = std::abs(v[1]);
    row.abs_m3 = std::abs(v[2]);
    row.m2_over_k1 = row.abs_m2 / k1;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mgsim::velocity
