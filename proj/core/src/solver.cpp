#include "mgsim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <string>

#include "mgsim/errors.hpp"
#include "mgsim/fft.hpp"
#include "mgsim/spectral_ops.hpp"

namespace mgsim::solver {

using velocity::MultiplierSymbol;

void SolverConfig::validate(const Grid& grid) const {
  std::vector<std::string> v;
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(kappa) || kappa < 0.0) v.push_back("solver.kappa: must be finite and >= 0");
  if (!finite(epsilon) || epsilon < 0.0) v.push_back("solver.epsilon: must be finite and >= 0");
  if (dt.has_value() == cfl.has_value()) v.push_back("solver: exactly one of dt and cfl must be given");
  if (dt && !(finite(*dt) && *dt > 0.0)) v.push_back("solver.dt: must be > 0");
  if (cfl && !(finite(*cfl) && *cfl > 0.0 && *cfl <= 1.0)) v.push_back("solver.cfl: must lie in (0, 1]");
  if (!(finite(t_final) && t_final > 0.0)) v.push_back("solver.t_final: must be > 0");
  if (!(finite(snapshot_interval) && snapshot_interval > 0.0))
    v.push_back("output.snapshot_interval: must be > 0");
  if (project_vertical && grid.dim() != 3) v.push_back("solver.project_vertical: requires a 3-d grid");
  if (forcing) {
    if (!(forcing->grid() == grid)) v.push_back("solver.forcing: grid does not match");
    else if (!forcing->all_finite()) v.push_back("solver.forcing: non-finite values");
  }
  if (!v.empty()) throw ConfigError(std::move(v));
}

double EnergyBudget::residual(double l2_sq_now, double kappa, double epsilon) const noexcept {
  return 0.5 * l2_sq_now - 0.5 * initial_l2_sq + kappa * grad_integral + epsilon * frac_integral -
         forcing_integral;
}

SpectralField nonlinear_term(const MultiplierSymbol& m, const SpectralField& theta_hat, bool dealias) {
  const Grid& g = theta_hat.grid();
  const auto u_hat = velocity::apply_velocity(m, theta_hat);
  const auto grad_hat = spectral::gradient(theta_hat);
  PhysicalField adv(g);
  auto out = adv.values();
  for (int j = 0; j < g.dim(); ++j) {
    const PhysicalField u = spectral::inverse_transform(u_hat[j]);
    const PhysicalField dth = spectral::inverse_transform(grad_hat[j]);
    const auto uv = u.values();
    const auto dv = dth.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += uv[i] * dv[i];
  }
  SpectralField n = spectral::forward_transform(adv);
  for (auto& c : n.coeffs()) c = -c;
  n[0] = Complex{};
  if (dealias) spectral::dealias_in_place(n);
  return n;
}

// ---------------------------------------------------------------------------

Stepper::Stepper(SolverConfig cfg, const MultiplierSymbol& m) : cfg_(std::move(cfg)), m_(m) {
  const Grid& g = m_.grid();
  cfg_.validate(g);
  has_advection_ = m_.kind() != velocity::SymbolKind::zero;
  const std::size_t ns = g.spectral_size();
  linear_.resize(ns);
  k2_.resize(ns);
  k3_.resize(ns);
  weight_.resize(ns);
  for_each_mode(g, [&](std::size_t s, const IVec& k, double w) {
    const double k2 = norm2(k);
    k2_[s] = k2;
    k3_[s] = k2 * std::sqrt(k2);
    weight_[s] = w;
    linear_[s] = -cfg_.kappa * k2 - cfg_.epsilon * k3_[s];
  });
  if (cfg_.forcing) {
    SpectralField f = spectral::forward_transform(*cfg_.forcing);
    apply_projections(f);
    forcing_hat_ = std::move(f);
  }
}

void Stepper::apply_projections(SpectralField& a) const {
  if (cfg_.dealias) spectral::dealias_in_place(a);
  if (cfg_.project_vertical) spectral::project_zero_vertical_mean_in_place(a);
}

SpectralField Stepper::rhs(const SpectralField& a) const {
  SpectralField n = has_advection_ ? nonlinear_term(m_, a, cfg_.dealias) : SpectralField(a.grid());
  if (forcing_hat_) {
    const auto f = forcing_hat_->coeffs();
    auto out = n.coeffs();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += f[i];
  }
  apply_projections(n);
  return n;
}

SolverState Stepper::initial_state(const PhysicalField& theta0) const {
  if (!(theta0.grid() == m_.grid())) throw std::invalid_argument("initial data grid does not match symbol grid");
  SolverState s{0.0, spectral::forward_transform(theta0), 0, {}};
  apply_projections(s.theta_hat);
  s.budget.initial_l2_sq = spectral::l2_norm_sq(s.theta_hat);
  return s;
}

double Stepper::cfl_dt(const SolverState& s) const {
  constexpr double kUFloor = 1e-8;
  const Grid& g = s.theta_hat.grid();
  double umax = 0.0;
  if (has_advection_) {
    const auto u_hat = velocity::apply_velocity(m_, s.theta_hat);
    std::vector<double> mag2(g.size(), 0.0);
    for (const auto& uh : u_hat) {
      const PhysicalField u = spectral::inverse_transform(uh);
      const auto v = u.values();
      for (std::size_t i = 0; i < v.size(); ++i) mag2[i] += v[i] * v[i];
    }
    umax = std::sqrt(*std::max_element(mag2.begin(), mag2.end()));
  }
  const double cfl = cfg_.cfl.value_or(1.0);
  return std::min(cfl * g.min_spacing() / std::max(umax, kUFloor), cfg_.snapshot_interval);
}

double Stepper::next_dt(const SolverState& s) const { return cfg_.dt ? *cfg_.dt : cfl_dt(s); }

SolverState Stepper::step(const SolverState& s, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be positive and finite");
  const Grid& g = s.theta_hat.grid();
  const std::size_t ns = g.spectral_size();
  if (dt != cached_dt_) {
    e_half_.resize(ns);
    e_full_.resize(ns);
    for (std::size_t i = 0; i < ns; ++i) {
      e_half_[i] = std::exp(0.5 * dt * linear_[i]);
      e_full_[i] = e_half_[i] * e_half_[i];
    }
    cached_dt_ = dt;
  }
  const double vol = g.volume();
  // Stage integrands for the energy budget: ‖∇a‖², ‖Λ^{3/2}a‖², ⟨S, a⟩.
  auto budget_terms = [&](const SpectralField& a) {
    std::array<double, 3> t{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < ns; ++i) {
      const double e = weight_[i] * std::norm(a[i]);
      t[0] += k2_[i] * e;
      t[1] += k3_[i] * e;
      if (forcing_hat_) t[2] += weight_[i] * (std::conj((*forcing_hat_)[i]) * a[i]).real();
    }
    for (auto& x : t) x *= vol;
    return t;
  };

  const SpectralField& a = s.theta_hat;
  const double h = dt;

  const SpectralField k1 = rhs(a);
  SpectralField a2(g);
  for (std::size_t i = 0; i < ns; ++i) a2[i] = e_half_[i] * (a[i] + 0.5 * h * k1[i]);
  const SpectralField k2 = rhs(a2);
  SpectralField a3(g);
  for (std::size_t i = 0; i < ns; ++i) a3[i] = e_half_[i] * a[i] + 0.5 * h * k2[i];
  const SpectralField k3 = rhs(a3);
  SpectralField a4(g);
  for (std::size_t i = 0; i < ns; ++i) a4[i] = e_full_[i] * a[i] + h * e_half_[i] * k3[i];
  const SpectralField k4 = rhs(a4);

  SolverState out{s.time + dt, SpectralField(g), s.step_count + 1, s.budget};
  auto& next = out.theta_hat;
  for (std::size_t i = 0; i < ns; ++i)
    next[i] = e_full_[i] * a[i] +
              (h / 6.0) * (e_full_[i] * k1[i] + 2.0 * e_half_[i] * (k2[i] + k3[i]) + k4[i]);
  apply_projections(next);

  const auto b1 = budget_terms(a), b2 = budget_terms(a2), b3 = budget_terms(a3), b4 = budget_terms(a4);
  out.budget.grad_integral += h / 6.0 * (b1[0] + 2.0 * b2[0] + 2.0 * b3[0] + b4[0]);
  out.budget.frac_integral += h / 6.0 * (b1[1] + 2.0 * b2[1] + 2.0 * b3[1] + b4[1]);
  out.budget.forcing_integral += h / 6.0 * (b1[2] + 2.0 * b2[2] + 2.0 * b3[2] + b4[2]);

  for (const auto& c : next.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw NumericalError("non-finite state at t = " + std::to_string(out.time) + " (step " +
                           std::to_string(out.step_count) + ")");
  return out;
}

SolverState step(const SolverState& state, const SolverConfig& cfg, const MultiplierSymbol& m) {
  Stepper st(cfg, m);
  return st.step(state, st.next_dt(state));
}

double cfl_dt(const SolverState& state, const SolverConfig& cfg, const MultiplierSymbol& m) {
  return Stepper(cfg, m).cfl_dt(state);
}

SolverState run(const PhysicalField& theta0, const SolverConfig& cfg, const MultiplierSymbol& m,
                const SnapshotSink& sink, const StateObserver& observer) {
  Stepper st(cfg, m);
  SolverState s = st.initial_state(theta0);
  const double norm0 = std::sqrt(s.budget.initial_l2_sq);

  auto emit = [&] {
    if (sink) sink(s.time, spectral::inverse_transform(s.theta_hat));
    if (observer) observer(s);
  };
  emit();

  const double T = cfg.t_final;
  const double interval = cfg.snapshot_interval;
  const double land_tol = 1e-12 * std::max(1.0, T);
  long next_index = 1;
  while (s.time < T - land_tol) {
    const double target = std::min(next_index * interval, T);
    double dt = st.next_dt(s);
    const bool lands = s.time + dt >= target - land_tol;
    if (lands) dt = target - s.time;
    s = st.step(s, dt);
    if (lands) s.time = target;

    if (!cfg.forcing) {
      const double norm = std::sqrt(spectral::l2_norm_sq(s.theta_hat));
      if (norm > 10.0 * norm0 && norm0 > 0.0)
        throw NumericalError("unstable run: |theta|_2 grew to " + std::to_string(norm / norm0) +
                             "x its initial value at t = " + std::to_string(s.time));
    }
    if (lands) {
      emit();
      if (target >= next_index * interval - land_tol) ++next_index;
    }
  }
  return s;
}

PhysicalField mollify_initial_data(const PhysicalField& theta0, double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("mollify_initial_data: eps must be >= 0");
  if (eps == 0.0) return theta0;
  SpectralField f = spectral::forward_transform(theta0);
  for_each_mode(f.grid(), [&](std::size_t s, const IVec& k, double) {
    f[s] *= std::exp(-0.5 * eps * eps * norm2(k));
  });
  return spectral::inverse_transform(f);
}

EpsilonStudyReport epsilon_study(const PhysicalField& theta0, const SolverConfig& cfg, const MultiplierSymbol& m,
                                 std::span<const double> eps_list) {
  if (eps_list.size() < 3) throw std::invalid_argument("epsilon_study: need at least 3 epsilon levels");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw std::invalid_argument("epsilon_study: epsilons must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("epsilon_study: epsilons must be strictly decreasing");
  }

  const double theta0_sq = Stepper(cfg, m).initial_state(theta0).budget.initial_l2_sq;

  struct Trajectory {
    std::vector<double> times;
    std::vector<PhysicalField> fields;
    std::optional<SolverState> final_state;
  };
  auto one_run = [&](double eps) {
    SolverConfig c = cfg;
    c.epsilon = eps;
    Trajectory tr;
    tr.final_state.emplace(run(mollify_initial_data(theta0, eps), c, m, [&](double t, const PhysicalField& f) {
      tr.times.push_back(t);
      tr.fields.push_back(f);
    }));
    return tr;
  };

  std::vector<std::future<Trajectory>> futures;
  for (double eps : eps_list) futures.push_back(std::async(std::launch::async, one_run, eps));
  std::vector<Trajectory> runs;
  for (auto& f : futures) runs.push_back(f.get());

  EpsilonStudyReport rep;
  rep.uniform_bound_holds = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    EpsilonRun r;
    r.eps = eps_list[i];
    r.final_l2_sq = spectral::l2_norm_sq(runs[i].final_state->theta_hat);
    r.grad_integral = runs[i].final_state->budget.grad_integral;
    r.bound_lhs = r.final_l2_sq + 2.0 * cfg.kappa * r.grad_integral;
    r.bound_rhs = theta0_sq * (1.0 + 1e-6);
    r.bound_holds = r.bound_lhs <= r.bound_rhs;
    rep.uniform_bound_holds = rep.uniform_bound_holds && r.bound_holds;
    rep.runs.push_back(r);
  }

  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    const auto& a = runs[i];
    const auto& b = runs[i + 1];
    if (a.times != b.times) throw std::logic_error("epsilon_study: snapshot times differ between runs");
    std::vector<double> dist_sq(a.times.size());
    for (std::size_t t = 0; t < a.times.size(); ++t) {
      const auto fa = a.fields[t].values();
      const auto fb = b.fields[t].values();
      double acc = 0.0;
      for (std::size_t x = 0; x < fa.size(); ++x) acc += (fa[x] - fb[x]) * (fa[x] - fb[x]);
      dist_sq[t] = acc * a.fields[t].grid().cell_volume();
    }
    double integral = 0.0;
    for (std::size_t t = 0; t + 1 < a.times.size(); ++t)
      integral += 0.5 * (a.times[t + 1] - a.times[t]) * (dist_sq[t] + dist_sq[t + 1]);
    rep.pairs.push_back({eps_list[i], eps_list[i + 1], std::sqrt(integral)});
  }
  rep.distances_decreasing = true;
  for (std::size_t i = 1; i < rep.pairs.size(); ++i)
    rep.distances_decreasing = rep.distances_decreasing && rep.pairs[i].distance < rep.pairs[i - 1].distance;
  return rep;
}

}  // namespace mgsim::solver
