#pragma once

#include <map>
#include <string>
#include <vector>

#include "mgsim/series.hpp"
#include "mgsim/symbols.hpp"

namespace mgsim::diag {

/// One empirical inequality lhs <= rhs evaluated on a snapshot series.
///
/// satisfied == (lhs <= rhs·(1 + rel_tol) + abs_tol + slack). `slack` is a
/// separately reported estimate of the time-quadrature error.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  /// Smallest constant that makes the inequality hold with it in place of the
  /// unspecified constant (for checks without one: lhs / rhs).
  double empirical_constant = 0.0;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  double slack = 0.0;
  bool degenerate = false;  ///< both sides vanish (empty level sets, zero oscillation)
  bool applicable = true;   ///< false when a hypothesis of the check fails
  std::map<std::string, double> context;
  std::vector<std::string> notes;
};

enum class Sign { plus, minus };

/// ∫(θ(t₂)-h)₊² + 2κ∫∫|∇(θ-h)₊|² <= ∫(θ(t₁)-h)₊² on the whole torus; with
/// Sign::minus the check is applied to -θ. Gradients are periodic central
/// differences, time integrals trapezoid on snapshot times. abs_tol is
/// 1e-6·‖θ(start)‖₂².
InequalityReport level_set_energy_check(const SnapshotSeries& s, double h, double t1, double t2,
                                        Sign sign = Sign::plus);

struct DeGiorgiSequence {
  double t0 = 0.0;
  double H = 0.0;
  std::vector<double> times;   ///< t_n = t₀(1 - 2⁻ⁿ)
  std::vector<double> levels;  ///< h_n = H(1 - 2⁻ⁿ)
  std::vector<double> c;       ///< c_n
  bool nonincreasing = false;
};

/// c_n = sup_{t >= t_n} ∫(θ-h_n)₊² + 2κ∫_{t_n}^{end}∫|∇(θ-h_n)₊|², n = 0..n_max.
/// The series must start at t = 0 and reach t0; n_max <= 12.
DeGiorgiSequence degiorgi_sequence(const SnapshotSeries& s, double t0, double H, int n_max);

/// H = C·c₀^{1/2}/t₀^{d/4} with c₀ computed from the series.
double degiorgi_level(const SnapshotSeries& s, double t0, double C);

struct LinfDecayRow {
  double t = 0.0;
  double linf = 0.0;
  double ratio = 0.0;  ///< t^{d/4}‖θ(t)‖∞ / ‖θ₀‖₂
};

struct LinfDecay {
  double sup_ratio = 0.0;
  std::vector<LinfDecayRow> rows;
};

/// Requires the first snapshot at t = 0 with θ₀ ≠ 0.
LinfDecay linf_decay_check(const SnapshotSeries& s);

/// First energy inequality on the backward cylinders Q_r ⊂ Q_R with r = shrink·R:
/// sup_t ‖(θ-h)₊‖²_{L²(B_r)} + ‖∇(θ-h)₊‖²_{L²(Q_r)}
///   <= C R/(R-r)² ‖(θ-h)₊‖^{2-2/(d+2)}_{L²(Q_R)} ‖(θ-h)₊‖^{2/(d+2)}_{L∞(Q_R)}.
InequalityReport local_energy_check(const SnapshotSeries& s, const velocity::TijSymbol& ts,
                                    const ParabolicCylinder& outer, double shrink, double h,
                                    double C = 1.0);

/// ‖(θ(t₂)-h)₊‖²_{L²(B_r)} <= ‖(θ(t₁)-h)₊‖²_{L²(B_R)} + C R^d (t₂-t₁)/(R-r)² ‖(θ-h)₊‖²_{L∞},
/// the sup taken over [t₁, t₂] × B_R.
InequalityReport second_energy_check(const SnapshotSeries& s, const velocity::TijSymbol& ts, const IVec& x0,
                                     double r, double R, double t1, double t2, double h, double C = 1.0);

struct DeGiorgiConstants {
  int d = 3;
  double kappa0 = 0.0;  ///< (4/5)^{1/d}
  int n0 = 0;           ///< least n >= 2 with 2ⁿ/(2ⁿ-2) <= √(6/5)
  double delta0 = 0.0;  ///< (1-κ₀)²/(12 C₀ κ₀²)
  double C0 = 1.0;
};

DeGiorgiConstants degiorgi_constants(int d, double C0 = 1.0);

struct ShrinkParams {
  double t1 = 0.0;
  IVec x0{0, 0, 0};
  double R = 1.0;
};

/// Level-set shrinking: with M, m the extremes over [t₁, t₁+δ₀R²] × B_R,
/// h = (M+m)/2 and H = M - (M-m)/2^{n₀}, the hypothesis
/// |{θ(t₁) >= h} ∩ B_r| <= ½|B_r| (r = κ₀R) should give
/// |{θ(t₂) >= H} ∩ B_R| <= ⅞|B_R| for t₂ ∈ [t₁, t₁+δ₀r²].
/// lhs is the largest conclusion fraction, rhs = 7/8. Not applicable when the
/// hypothesis fails.
InequalityReport level_set_shrink_check(const SnapshotSeries& s, const ShrinkParams& p, double C0 = 1.0);

struct OscillationTrace {
  double t0 = 0.0;
  IVec x0{0, 0, 0};
  std::vector<double> radii;  ///< r_max κ₀^j, decreasing
  std::vector<double> osc;
  std::vector<double> sup;    ///< M(r)
  std::vector<double> inf;    ///< m(r)
  std::vector<double> gamma_ratios;
  double alpha = 0.0;         ///< slope of log osc against log r
  double fit_residual = 0.0;  ///< RMS residual of that fit
  bool alpha_defined = false;
  bool degenerate = false;
};

/// osc over nested backward cylinders Q_r(t0, x0). Throws if levels < 3 or a
/// cylinder leaves the snapshot range.
OscillationTrace oscillation_trace(const SnapshotSeries& s, double t0, const IVec& x0, double r_max,
                                   int levels);

struct BmoOptions {
  int min_cells = 4;
  /// Offsets visited per axis step; 1 visits every cyclic offset.
  int offset_stride = 1;
};

/// max over cubes Q of (1/|Q|)∫_Q |f - f_Q|, with Q ranging over dyadic side
/// lengths N/2^j (down to min_cells cells) placed at every cyclic offset.
double bmo_norm(const PhysicalField& f, const BmoOptions& opt = {});

struct BmoDriftRow {
  double t = 0.0;
  double bmo_max = 0.0;  ///< max over (i, j) of bmo(V_ij)
  double linf = 0.0;     ///< ‖θ(t)‖∞
  double ratio = 0.0;    ///< bmo_max / linf (0 when θ = 0)
  int i = 0;
  int j = 0;
};

/// V_ij = T_ij θ at every snapshot.
std::vector<BmoDriftRow> bmo_drift_series(const SnapshotSeries& s, const velocity::TijSymbol& ts,
                                          const BmoOptions& opt = {});

}  // namespace mgsim::diag
