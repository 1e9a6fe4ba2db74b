#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mgsim/grid.hpp"
#include "mgsim/symbols.hpp"

namespace mgsim::solver {

/// Parameters of ∂ₜθ + u·∇θ = κΔθ - εΛ³θ + S, u = M[θ].
struct SolverConfig {
  double kappa = 0.0;
  double epsilon = 0.0;
  std::optional<double> dt;   ///< fixed step; exclusive with cfl
  std::optional<double> cfl;  ///< Courant number in (0, 1]
  double t_final = 1.0;
  bool dealias = true;
  bool project_vertical = false;
  std::optional<PhysicalField> forcing;  ///< static source S
  double snapshot_interval = 0.1;

  /// Throws ConfigError listing every violated range rule.
  void validate(const Grid& grid) const;
  /// Advection-only run (no dissipation of either kind).
  bool inviscid() const noexcept { return kappa == 0.0 && epsilon == 0.0; }
};

/// Time integrals accumulated alongside θ with the same Runge–Kutta stages.
struct EnergyBudget {
  double initial_l2_sq = 0.0;     ///< ‖θ₀‖₂²
  double grad_integral = 0.0;     ///< ∫ ‖∇θ‖₂² dt
  double frac_integral = 0.0;     ///< ∫ ‖Λ^{3/2}θ‖₂² dt
  double forcing_integral = 0.0;  ///< ∫ ⟨S, θ⟩ dt

  /// ½‖θ(t)‖² - ½‖θ₀‖² + ∫(κ‖∇θ‖² + ε‖Λ^{3/2}θ‖² - ⟨S,θ⟩) dt.
  double residual(double l2_sq_now, double kappa, double epsilon) const noexcept;
};

struct SolverState {
  double time = 0.0;
  SpectralField theta_hat;
  long step_count = 0;
  EnergyBudget budget;
};

/// -dealias(u·∇θ) with u = M[θ]; the product is formed in physical space.
SpectralField nonlinear_term(const velocity::MultiplierSymbol& m, const SpectralField& theta_hat,
                             bool dealias = true);

/// Integrating-factor RK4 stepper: the linear symbol L(k) = -κ|k|² - ε|k|³ is
/// integrated exactly, the advection (plus forcing) by classical RK4.
class Stepper {
 public:
  Stepper(SolverConfig cfg, const velocity::MultiplierSymbol& m);

  const SolverConfig& config() const noexcept { return cfg_; }

  /// Advance by `dt`. Throws NumericalError if the new state is not finite.
  SolverState step(const SolverState& s, double dt);
  /// cfl·h_min / max(‖u‖∞, 1e-8), capped at the snapshot interval; cfg.dt if fixed.
  double next_dt(const SolverState& s) const;
  double cfl_dt(const SolverState& s) const;

  /// Projected initial state (dealias / zero vertical mean per config).
  SolverState initial_state(const PhysicalField& theta0) const;

 private:
  SpectralField rhs(const SpectralField& a) const;
  void apply_projections(SpectralField& a) const;

  SolverConfig cfg_;
  velocity::MultiplierSymbol m_;
  bool has_advection_;
  std::optional<SpectralField> forcing_hat_;
  std::vector<double> linear_;  // L(k) per stored mode
  std::vector<double> k2_;
  std::vector<double> k3_;      // |k|³
  std::vector<double> weight_;  // Parseval multiplicity
  double cached_dt_ = -1.0;
  std::vector<double> e_half_, e_full_;
};

SolverState step(const SolverState& state, const SolverConfig& cfg, const velocity::MultiplierSymbol& m);
double cfl_dt(const SolverState& state, const SolverConfig& cfg, const velocity::MultiplierSymbol& m);

/// Receives each snapshot as (time, θ): t = 0, every snapshot_interval, and t_final.
using SnapshotSink = std::function<void(double time, const PhysicalField& theta)>;
/// Sees the full state at each snapshot time (after the sink).
using StateObserver = std::function<void(const SolverState& state)>;

/// Integrate from θ₀ to t_final. Throws NumericalError on non-finite states or
/// when ‖θ‖₂ exceeds 10‖θ₀‖₂ in an unforced run.
SolverState run(const PhysicalField& theta0, const SolverConfig& cfg, const velocity::MultiplierSymbol& m,
                const SnapshotSink& sink, const StateObserver& observer = {});

/// Gaussian mollifier in spectral space: θ̂ ↦ e^{-(ε|k|)²/2} θ̂. eps = 0 is the identity.
PhysicalField mollify_initial_data(const PhysicalField& theta0, double eps);

struct EpsilonRun {
  double eps = 0.0;
  double final_l2_sq = 0.0;        ///< ‖θ^ε(T)‖₂²
  double grad_integral = 0.0;      ///< ∫₀ᵀ ‖∇θ^ε‖₂² dt
  double bound_lhs = 0.0;          ///< ‖θ^ε(T)‖² + 2κ∫‖∇θ^ε‖²
  double bound_rhs = 0.0;          ///< ‖θ₀‖² (1 + 1e-6)
  bool bound_holds = false;
};

struct EpsilonPair {
  double eps_a = 0.0;
  double eps_b = 0.0;
  double distance = 0.0;  ///< ‖θ^{ε_a} - θ^{ε_b}‖ in L²([0,T] × 𝕋^d)
};

struct EpsilonStudyReport {
  std::vector<EpsilonRun> runs;
  std::vector<EpsilonPair> pairs;
  bool distances_decreasing = false;
  bool uniform_bound_holds = false;
};

/// Regularised runs with mollified data for each ε in a strictly decreasing list
/// (≥ 3 entries); runs execute concurrently.
EpsilonStudyReport epsilon_study(const PhysicalField& theta0, const SolverConfig& cfg,
                                 const velocity::MultiplierSymbol& m, std::span<const double> eps_list);

}  // namespace mgsim::solver
