#include "mgsim/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "json.hpp"
#include "mgsim/errors.hpp"
#include "mgsim/fft.hpp"
#include "mgsim/snapshot_io.hpp"
#include "mgsim/spectral_ops.hpp"

namespace mgsim::io {
namespace {

using nlohmann::json;

json ivec(const IVec& v, int d) {
  json a = json::array();
  for (int i = 0; i < d; ++i) a.push_back(v[i]);
  return a;
}

json j_report(const diag::InequalityReport& r) {
  return {{"name", r.name},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"satisfied", r.satisfied},
          {"empirical_constant", r.empirical_constant},
          {"rel_tol", r.rel_tol},
          {"abs_tol", r.abs_tol},
          {"slack", r.slack},
          {"degenerate", r.degenerate},
          {"applicable", r.applicable},
          {"context", r.context},
          {"notes", r.notes}};
}

json j_sequence(const diag::DeGiorgiSequence& s) {
  return {{"t0", s.t0},         {"H", s.H}, {"times", s.times}, {"levels", s.levels},
          {"c", s.c},           {"nonincreasing", s.nonincreasing}};
}

json j_linf(const diag::LinfDecay& l) {
  json rows = json::array();
  for (const auto& r : l.rows) rows.push_back({{"t", r.t}, {"linf", r.linf}, {"ratio", r.ratio}});
  return {{"sup_ratio", l.sup_ratio}, {"rows", rows}};
}

json j_trace(const diag::OscillationTrace& t, int d) {
  return {{"t0", t.t0},
          {"x0", ivec(t.x0, d)},
          {"radii", t.radii},
          {"osc", t.osc},
          {"sup", t.sup},
          {"inf", t.inf},
          {"gamma_ratios", t.gamma_ratios},
          {"alpha", t.alpha_defined ? json(t.alpha) : json(nullptr)},
          {"fit_residual", t.fit_residual},
          {"alpha_defined", t.alpha_defined},
          {"degenerate", t.degenerate}};
}

json j_constants(const diag::DeGiorgiConstants& c) {
  return {{"d", c.d}, {"kappa0", c.kappa0}, {"n0", c.n0}, {"delta0", c.delta0}, {"C0", c.C0}};
}

json j_bmo(std::span<const diag::BmoDriftRow> rows) {
  json a = json::array();
  for (const auto& r : rows)
    a.push_back({{"t", r.t}, {"bmo_max", r.bmo_max}, {"linf", r.linf}, {"ratio", r.ratio}, {"i", r.i}, {"j", r.j}});
  return a;
}

json j_epsilon(const solver::EpsilonStudyReport& r) {
  json runs = json::array();
  for (const auto& x : r.runs)
    runs.push_back({{"eps", x.eps},
                    {"final_l2_sq", x.final_l2_sq},
                    {"grad_integral", x.grad_integral},
                    {"bound_lhs", x.bound_lhs},
                    {"bound_rhs", x.bound_rhs},
                    {"bound_holds", x.bound_holds}});
  json pairs = json::array();
  for (const auto& p : r.pairs) pairs.push_back({{"eps_a", p.eps_a}, {"eps_b", p.eps_b}, {"distance", p.distance}});
  return {{"runs", runs},
          {"pairs", pairs},
          {"distances_decreasing", r.distances_decreasing},
          {"uniform_bound_holds", r.uniform_bound_holds}};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double uniform() { return double(rng_() >> 11) * 0x1.0p-53; }
  IVec cell(const Grid& g) {
    IVec x{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) x[a] = static_cast<int>(rng_() % static_cast<std::uint64_t>(g.n(a)));
    return x;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

std::string to_json(const diag::InequalityReport& r) { return j_report(r).dump(); }
std::string to_json(const diag::DeGiorgiSequence& s) { return j_sequence(s).dump(); }
std::string to_json(const diag::LinfDecay& l) { return j_linf(l).dump(); }
std::string to_json(const diag::OscillationTrace& t) { return j_trace(t, kMaxDim).dump(); }
std::string to_json(const diag::DeGiorgiConstants& c) { return j_constants(c).dump(); }
std::string to_json(std::span<const diag::BmoDriftRow> rows) { return j_bmo(rows).dump(); }
std::string to_json(const solver::EpsilonStudyReport& r) { return j_epsilon(r).dump(); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

TimeseriesRow timeseries_row(const solver::SolverState& s, const solver::SolverConfig& cfg) {
  TimeseriesRow r;
  r.t = s.time;
  const double l2sq = spectral::l2_norm_sq(s.theta_hat);
  r.l2 = std::sqrt(l2sq);
  r.h1_seminorm = std::sqrt(spectral::homogeneous_sobolev_sq(s.theta_hat, 1.0));
  r.linf = spectral::linf_norm(spectral::inverse_transform(s.theta_hat));
  r.energy_residual = s.budget.residual(l2sq, cfg.kappa, cfg.epsilon);
  return r;
}

void write_timeseries_csv(const std::filesystem::path& path, std::span<const TimeseriesRow> rows) {
  std::string text = "t,L2,H1_seminorm,Linf,energy_residual\n";
  for (const auto& r : rows)
    text += num(r.t) + "," + num(r.l2) + "," + num(r.h1_seminorm) + "," + num(r.linf) + "," + num(r.energy_residual) +
            "\n";
  write_text(path, text);
}

RunSummary run_to_directory(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const auto symbol = build_symbol(cfg);
  const auto theta0 = build_field(cfg, cfg.initial);
  const auto scfg = build_solver_config(cfg);

  RunSummary sum;
  const auto final_state = solver::run(
      theta0, scfg, symbol,
      [&](double t, const PhysicalField& f) {
        write_snapshot(out_dir / snapshot_filename(sum.snapshots), f, t, scfg.kappa, scfg.epsilon);
        ++sum.snapshots;
      },
      [&](const solver::SolverState& s) { sum.rows.push_back(timeseries_row(s, scfg)); });
  sum.steps = final_state.step_count;
  sum.final_time = final_state.time;
  write_timeseries_csv(out_dir / "timeseries.csv", sum.rows);
  return sum;
}

void write_symbol_scan(const RunConfig& cfg, const std::filesystem::path& path) {
  const auto m = build_symbol(cfg);
  const auto t = velocity::tij_from_symbol(m);
  std::string text;
  text += "# operator=" + velocity::to_string(m.kind()) + "\n";
  text += "# divergence_max=" + num(m.divergence_defect()) + "\n";
  text += "# reality_defect=" + num(m.reality_defect()) + "\n";
  text += "# growth_constant=" + num(velocity::measure_growth_constant(m)) + "\n";
  text += "# tij_reconstruction_defect=" + num(velocity::tij_reconstruction_defect(m, t)) + "\n";
  text += "# tij_sup_norm=" + num(t.sup_norm()) + "\n";
  text += "k1,k2,k3,abs_m1,abs_m2,abs_m3,m2_over_k1\n";
  if (m.kind() == velocity::SymbolKind::mg) {
    const std::vector<int> k1s{4, 8, 16, 32, 64, 100, 128, 200, 256, 400, 800, 1600};
    for (const auto& r : velocity::curved_region_scan(m, 0.5, k1s))
      text += std::to_string(r.k1) + "," + std::to_string(r.k2) + "," + std::to_string(r.k3) + "," + num(r.abs_m1) +
              "," + num(r.abs_m2) + "," + num(r.abs_m3) + "," + num(r.m2_over_k1) + "\n";
  }
  write_text(path, text);
}

std::string diagnose(const diag::SnapshotSeries& s, const RunConfig& cfg, std::span<const std::string> checks) {
  const auto& D = cfg.diagnostics;
  const Grid& g = s.grid();
  const int d = g.dim();
  auto wants = [&](const char* name) { return std::find(checks.begin(), checks.end(), name) != checks.end(); };
  for (const auto& c : checks) {
    const auto& names = known_checks();
    if (std::find(names.begin(), names.end(), c) == names.end()) throw ConfigError({"checks: unknown check " + c});
  }

  json out;
  out["series"] = {{"snapshots", s.size()},
                   {"start", s.start()},
                   {"end", s.end()},
                   {"kappa", s.metadata().kappa},
                   {"epsilon", s.metadata().epsilon},
                   {"operator", s.metadata().operator_kind},
                   {"dims", std::vector<int>(g.dims().begin(), g.dims().end())}};
  json results = json::object();
  bool all_ok = true;
  int report_count = 0;
  auto add = [&](const std::string& key, const diag::InequalityReport& r) {
    results[key].push_back(j_report(r));
    ++report_count;
    if (r.applicable && !r.satisfied) all_ok = false;
  };
  const double lo = s.global_min();
  const double hi = s.global_max();
  Sampler rng(D.seed);

  if (wants("energy")) {
    auto r = diag::level_set_energy_check(s, lo - 1.0, s.start(), s.end());
    r.name = "energy";
    add("energy", r);
  }
  if (wants("levelset")) {
    const int nh = D.sample_count;
    std::vector<std::pair<double, double>> windows{{s.start(), s.end()}};
    const std::size_t n = s.size();
    for (std::size_t q = 1; q <= 4; ++q) {
      const std::size_t a = (q - 1) * (n - 1) / 4;
      const std::size_t b = q * (n - 1) / 4;
      if (a < b) windows.emplace_back(s.times()[a], s.times()[b]);
    }
    for (int i = 0; i < nh; ++i) {
      const double h = lo + (i + 0.5) / nh * (hi - lo);
      for (const auto& [t1, t2] : windows) {
        add("levelset", diag::level_set_energy_check(s, h, t1, t2, diag::Sign::plus));
        add("levelset", diag::level_set_energy_check(s, -h, t1, t2, diag::Sign::minus));
      }
    }
  }
  if (wants("degiorgi")) {
    const double t0 = std::min(D.t0.value_or(0.25 * s.end()), s.end());
    const double H = diag::degiorgi_level(s, t0, D.H_constant);
    const auto seq = diag::degiorgi_sequence(s, t0, H, D.n_max);
    out["degiorgi"] = j_sequence(seq);
    out["degiorgi"]["H_constant"] = D.H_constant;
    if (!seq.nonincreasing) all_ok = false;
    out["degiorgi_constants"] = j_constants(diag::degiorgi_constants(d, D.C0));
  }
  if (wants("linf")) out["linf"] = j_linf(diag::linf_decay_check(s));

  const bool need_tij = wants("local_energy") || wants("second_energy") || wants("bmo");
  std::optional<velocity::TijSymbol> tij;
  if (need_tij) tij = velocity::tij_from_symbol(build_symbol(cfg));

  if (wants("local_energy")) {
    const double R = std::min(D.r_max, std::sqrt(std::max(0.0, s.end() - s.start())));
    for (int i = 0; i < D.sample_count; ++i) {
      const IVec x0 = rng.cell(g);
      const PhysicalField& last = s.fields().back();
      std::vector<double> vals;
      for (auto c : diag::ball_cells(g, x0, R)) vals.push_back(last[c]);
      std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
      const double h = vals[vals.size() / 2];
      add("local_energy", diag::local_energy_check(s, *tij, {s.end(), x0, R}, D.shrink, h));
    }
  }
  if (wants("second_energy")) {
    const double R = D.r_max;
    const double t1 = s.times()[(s.size() - 1) / 2];
    for (int i = 0; i < D.sample_count; ++i) {
      const IVec x0 = rng.cell(g);
      const double h = lo + rng.uniform() * (hi - lo);
      add("second_energy",
          diag::second_energy_check(s, *tij, x0, D.shrink * R, R, t1, s.end(), h));
    }
  }
  if (wants("shrink")) {
    const auto k = diag::degiorgi_constants(d, D.C0);
    const double R = D.r_max;
    const double span = s.end() - s.start() - k.delta0 * R * R;
    if (span < 0.0) {
      results["shrink"] = json::array();
      out["shrink_note"] = "snapshot range shorter than delta0 R^2";
    } else {
      for (int i = 0; i < D.sample_count; ++i) {
        const IVec x0 = rng.cell(g);
        const double t1 = s.start() + rng.uniform() * span;
        add("shrink", diag::level_set_shrink_check(s, {t1, x0, R}, D.C0));
      }
    }
  }
  if (wants("bmo")) {
    diag::BmoOptions opt;
    opt.min_cells = D.bmo_min_cells;
    const auto rows = diag::bmo_drift_series(s, *tij, opt);
    out["bmo"] = j_bmo(rows);
    double sup = 0.0;
    for (const auto& r : rows) sup = std::max(sup, r.ratio);
    out["bmo_ratio_sup"] = sup;
  }
  if (wants("oscillation")) {
    json traces = json::array();
    const double r_max = std::min(D.r_max, std::sqrt(std::max(0.0, s.end() - s.start())));
    bool gammas_ok = true;
    for (int i = 0; i < D.sample_count; ++i) {
      const IVec x0 = rng.cell(g);
      const auto tr = diag::oscillation_trace(s, s.end(), x0, r_max, D.levels);
      for (double gm : tr.gamma_ratios) gammas_ok = gammas_ok && gm <= 1.0;
      traces.push_back(j_trace(tr, d));
    }
    out["oscillation"] = traces;
    if (!gammas_ok) all_ok = false;
  }

  out["reports"] = results;
  out["report_count"] = report_count;
  out["all_satisfied"] = all_ok;
  return out.dump(2);
}

solver::EpsilonStudyReport run_epsilon_study(const RunConfig& cfg, std::span<const double> eps) {
  return solver::epsilon_study(build_field(cfg, cfg.initial), build_solver_config(cfg), build_symbol(cfg), eps);
}

void write_epsilon_study(const std::filesystem::path& path, const solver::EpsilonStudyReport& r) {
  if (path.extension() == ".json") {
    write_text(path, j_epsilon(r).dump(2));
    return;
  }
  std::string text = "eps,final_l2_sq,grad_integral,bound_lhs,bound_rhs,bound_holds,distance_to_next\n";
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    const auto& x = r.runs[i];
    text += num(x.eps) + "," + num(x.final_l2_sq) + "," + num(x.grad_integral) + "," + num(x.bound_lhs) + "," +
            num(x.bound_rhs) + "," + (x.bound_holds ? "1" : "0") + "," +
            (i < r.pairs.size() ? num(r.pairs[i].distance) : std::string()) + "\n";
  }
  write_text(path, text);
}

}  // namespace mgsim::io
