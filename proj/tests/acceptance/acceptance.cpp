// Acceptance runner: one [PASS]/[FAIL] line per criterion.
//
//   mgsim_acceptance                 all criteria
//   mgsim_acceptance --criterion 7   just one
//
// Exit status is nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mgsim/diagnostics.hpp"
#include "mgsim/fft.hpp"
#include "mgsim/initial_data.hpp"
#include "mgsim/report_io.hpp"
#include "mgsim/snapshot_io.hpp"
#include "mgsim/solver.hpp"
#include "mgsim/spectral_ops.hpp"
#include "mgsim/symbols.hpp"

using namespace mgsim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const velocity::MgParams kRef{0.5, 1.0};
const io::RandomBandlimited kData{1, 4, 0.1, 2024};

struct Series {
  diag::SnapshotSeries series;
  solver::SolverState final_state;
  double theta0_sq;
};

// Diffusive MG run shared by criteria 6, 7, 8 and 12.
Series diffusive_run(int n) {
  const Grid g{n, n, n};
  solver::SolverConfig cfg;
  cfg.kappa = 1.0;
  cfg.cfl = 0.25;
  cfg.t_final = 1.0;
  cfg.snapshot_interval = 0.02;
  cfg.project_vertical = true;
  const auto m = velocity::mg_symbol(kRef, g);
  const auto theta0 = io::random_bandlimited(g, kData, true);
  std::vector<double> times;
  std::vector<PhysicalField> fields;
  auto fin = solver::run(theta0, cfg, m, [&](double t, const PhysicalField& f) {
    times.push_back(t);
    fields.push_back(f);
  });
  const double sq = fin.budget.initial_l2_sq;
  return {diag::SnapshotSeries(g, std::move(times), std::move(fields), {1.0, 0.0, "mg"}), std::move(fin), sq};
}

const Series& shared_run() {
  static std::optional<Series> s;
  if (!s) s.emplace(diffusive_run(64));
  return *s;
}

Outcome criterion_1() {
  const Grid g{32, 32, 32};
  const auto m = velocity::mg_symbol(kRef, g);
  double worst = 0.0;
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const IVec idx = g.unflatten(flat);
    const IVec k{g.wavenumber(0, idx[0]), g.wavenumber(1, idx[1]), g.wavenumber(2, idx[2])};
    Complex dot = 0.0;
    double mmax = 0.0;
    for (int j = 0; j < 3; ++j) {
      dot += double(k[j]) * m.at(k, j);
      mmax = std::max(mmax, std::abs(m.at(k, j)));
    }
    const double bound = 1e-12 * (1.0 + std::sqrt(norm2(k))) * mmax;
    worst = std::max(worst, bound > 0.0 ? std::abs(dot) / bound : (std::abs(dot) > 0.0 ? 2.0 : 0.0));
  }
  const double expect_a[3] = {2.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0};
  const double expect_b[3] = {0.0, -1.0, 0.0};
  double spot = 0.0;
  for (int j = 0; j < 3; ++j) {
    spot = std::max(spot, std::abs(m.at({0, 1, 1}, j) - expect_a[j]));
    spot = std::max(spot, std::abs(m.at({1, 0, 1}, j) - expect_b[j]));
  }
  return {worst <= 1.0 && spot <= 1e-14,
          fmt("max |k.M|/bound = %.3g (need <= 1), spot-value error %.3g (need <= 1e-14)", worst, spot)};
}

Outcome criterion_2() {
  const Grid g{32, 32, 32};
  const auto m = velocity::mg_symbol(kRef, g);
  const auto t = velocity::tij_from_symbol(m);
  double worst = 0.0, mmax = 0.0;
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const IVec idx = g.unflatten(flat);
    const IVec k{g.wavenumber(0, idx[0]), g.wavenumber(1, idx[1]), g.wavenumber(2, idx[2])};
    for (int j = 0; j < 3; ++j) {
      Complex s = 0.0;
      for (int i = 0; i < 3; ++i) s += Complex(0.0, k[i]) * t.at(k, i, j);
      worst = std::max(worst, std::abs(s - m.at(k, j)));
      mmax = std::max(mmax, std::abs(m.at(k, j)));
    }
  }
  const double rel = worst / mmax;
  return {rel <= 1e-12, fmt("max |sum_i (i k_i) T_ij - M_j| / max|M| = %.3g (need <= 1e-12)", rel)};
}

Outcome criterion_3() {
  const auto m = velocity::mg_symbol(kRef, Grid{8, 8, 8});
  const std::vector<int> k1s{100, 200, 400};
  const auto rows = velocity::curved_region_scan(m, 0.5, k1s);
  bool ok = rows.size() == 3;
  std::string d;
  for (const auto& r : rows) {
    ok = ok && r.m2_over_k1 >= 0.45 && r.m2_over_k1 <= 0.55;
    d += fmt("k1=%d k2=%d ratio=%.4f; ", r.k1, r.k2, r.m2_over_k1);
  }
  return {ok, d + "need ratio in [0.45, 0.55]"};
}

double single_mode_error(std::optional<double> dt, double cfl, double* used_dt) {
  const Grid g{32, 32, 32};
  const auto m = velocity::mg_symbol(kRef, g);
  const auto th = PhysicalField::from_function(g, [](const RVec& x) { return std::cos(x[1] + x[2]); });
  solver::SolverConfig cfg;
  cfg.kappa = 1.0;
  cfg.t_final = 0.5;
  cfg.snapshot_interval = 0.5;
  cfg.project_vertical = true;
  if (dt) cfg.dt = dt;
  else cfg.cfl = cfl;
  if (used_dt) {
    solver::Stepper st(cfg, m);
    *used_dt = st.next_dt(st.initial_state(th));
  }
  double err = 0.0;
  solver::run(th, cfg, m, [&](double t, const PhysicalField& f) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const RVec x = g.position(i);
      err = std::max(err, std::abs(f[i] - std::exp(-2.0 * t) * std::cos(x[1] + x[2])));
    }
  });
  return err;
}

Outcome criterion_4() {
  double dt = 0.0;
  const double e1 = single_mode_error(std::nullopt, 0.25, &dt);
  const double e_dt = single_mode_error(dt, 0.0, nullptr);
  const double e_half = single_mode_error(dt / 2, 0.0, nullptr);
  const double ratio = e_half > 0.0 ? e_dt / e_half : (e_dt > 0.0 ? INFINITY : 1.0);
  return {e1 <= 1e-8 && ratio >= 12.0,
          fmt("max error %.3g at CFL 0.25 (need <= 1e-8); error(dt=%.4g) = %.3g, error(dt/2) = %.3g, ratio %.3g "
              "(need >= 12)",
              e1, dt, e_dt, e_half, ratio)};
}

Outcome criterion_5() {
  const Grid g{32, 32, 32};
  solver::SolverConfig cfg;
  cfg.kappa = 0.0;
  cfg.epsilon = 0.0;
  cfg.cfl = 0.25;
  cfg.t_final = 1.0;
  cfg.snapshot_interval = 1.0;
  cfg.project_vertical = true;
  const auto m = velocity::mg_symbol(kRef, g);
  const auto theta0 = io::random_bandlimited(g, kData, true);
  const auto fin = solver::run(theta0, cfg, m, {});
  const double drift = std::abs(std::sqrt(spectral::l2_norm_sq(fin.theta_hat) / fin.budget.initial_l2_sq) - 1.0);
  return {drift <= 1e-6, fmt("| ||theta(1)|| / ||theta0|| - 1 | = %.3g after %ld steps (need <= 1e-6)", drift,
                             fin.step_count)};
}

Outcome criterion_6() {
  const auto& r = shared_run();
  const double l2 = spectral::l2_norm_sq(r.final_state.theta_hat);
  const double res = std::abs(r.final_state.budget.residual(l2, 1.0, 0.0));
  return {res <= 1e-6 * r.theta0_sq, fmt("|energy residual| / ||theta0||^2 = %.3g after %ld steps (need <= 1e-6)",
                                         res / r.theta0_sq, r.final_state.step_count)};
}

Outcome criterion_7() {
  const auto& s = shared_run().series;
  const double lo = s.global_min(), hi = s.global_max();
  const double pairs[5][2] = {{0.02, 0.1}, {0.1, 0.3}, {0.2, 0.6}, {0.3, 1.0}, {0.5, 0.7}};
  int bad = 0, total = 0;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double h = lo + (hi - lo) * i / 9.0;
    for (const auto& p : pairs) {
      const auto r = diag::level_set_energy_check(s, h, p[0], p[1]);
      ++total;
      if (!r.satisfied) ++bad;
      if (!r.degenerate) worst = std::max(worst, r.empirical_constant);
    }
  }
  return {bad == 0, fmt("%d of %d reports satisfied; worst lhs/rhs = %.6f", total - bad, total, worst)};
}

Outcome criterion_8() {
  const auto& s = shared_run().series;
  const double t0 = 0.25;
  const double H = diag::degiorgi_level(s, t0, 4.0);
  const auto seq = diag::degiorgi_sequence(s, t0, H, 8);
  const double c0 = seq.c.front(), c8 = seq.c.back();
  return {seq.nonincreasing && c8 <= 1e-3 * c0,
          fmt("H = %.4g (sup theta = %.4g), c0 = %.4g, c8 = %.3g, nonincreasing = %s", H, s.global_max(), c0, c8,
              seq.nonincreasing ? "yes" : "no")};
}

Outcome criterion_9() {
  const double a = diag::linf_decay_check(diffusive_run(32).series).sup_ratio;
  const double b = diag::linf_decay_check(diffusive_run(48).series).sup_ratio;
  const double change = std::abs(a - b) / std::max(a, b);
  return {std::isfinite(a) && std::isfinite(b) && change < 0.2,
          fmt("sup t^{3/4}||theta||_inf/||theta0||_2: 32^3 %.5g, 48^3 %.5g, change %.3g (need < 0.2)", a, b, change)};
}

Outcome criterion_10() {
  const auto c3 = diag::degiorgi_constants(3);
  const auto c2 = diag::degiorgi_constants(2);
  auto sig4 = [](double v, double ref) { return std::abs(v - ref) <= 0.5e-3 * std::abs(ref); };
  const bool ok = std::abs(c3.kappa0 - 0.928318) < 1e-6 && c3.n0 == 5 && std::abs(c2.kappa0 - 0.894427) < 1e-6 &&
                  c2.n0 == 5 && sig4(c3.delta0, 4.969e-4) && sig4(c2.delta0, 1.1610e-3) &&
                  std::abs(std::pow(c3.kappa0, 3) - 0.8) < 1e-15 && std::abs(std::pow(c2.kappa0, 2) - 0.8) < 1e-15;
  return {ok, fmt("d=3: kappa0 %.6f n0 %d delta0 %.4g; d=2: kappa0 %.6f n0 %d delta0 %.5g", c3.kappa0, c3.n0,
                  c3.delta0, c2.kappa0, c2.n0, c2.delta0)};
}

double bmo_all_offsets(const PhysicalField& f) {
  const int n = f.grid().n(0);
  double best = 0.0;
  for (int side = 1; side <= n; ++side)
    for (int oy = 0; oy < n; ++oy)
      for (int ox = 0; ox < n; ++ox) {
        double mean = 0.0;
        for (int a = 0; a < side; ++a)
          for (int b = 0; b < side; ++b) mean += f[((oy + a) % n) * n + (ox + b) % n];
        mean /= double(side) * side;
        double osc = 0.0;
        for (int a = 0; a < side; ++a)
          for (int b = 0; b < side; ++b) osc += std::abs(f[((oy + a) % n) * n + (ox + b) % n] - mean);
        best = std::max(best, osc / (double(side) * side));
      }
  return best;
}

Outcome criterion_11() {
  const Grid g{32, 32};
  PhysicalField c(g);
  for (auto& v : c.values()) v = 1.75;
  const double b_const = diag::bmo_norm(c);

  const auto f = io::random_bandlimited(g, {1, 8, 1.0, 5}, false);
  const double b = diag::bmo_norm(f);
  double hom = 0.0;
  for (double lambda : {-3.0, 0.5, 7.25}) {
    PhysicalField s = f;
    for (auto& v : s.values()) v *= lambda;
    hom = std::max(hom, std::abs(diag::bmo_norm(s) - std::abs(lambda) * b) / (std::abs(lambda) * b));
  }

  PhysicalField step(g);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) step[i * 32 + j] = j >= 8 && j < 24 ? 1.0 : 0.0;
  const double dyadic = diag::bmo_norm(step);
  const double oracle = bmo_all_offsets(step);
  const double factor = std::max(dyadic, oracle) / std::min(dyadic, oracle);
  return {b_const == 0.0 && hom <= 1e-12 && factor <= 2.0,
          fmt("bmo(const) = %.3g; homogeneity defect %.3g (need <= 1e-12); step: dyadic %.5f, oracle %.5f, factor "
              "%.4f (need <= 2)",
              b_const, hom, dyadic, oracle, factor)};
}

Outcome criterion_12() {
  const auto& s = shared_run().series;
  const Grid& g = s.grid();
  std::mt19937_64 rng(12);
  int bad_gamma = 0, bad_alpha = 0;
  double amin = INFINITY, amax = -INFINITY, resmax = 0.0;
  const int centres = 8;
  for (int c = 0; c < centres; ++c) {
    IVec x0{0, 0, 0};
    for (int a = 0; a < 3; ++a) x0[a] = int(rng() % std::uint64_t(g.n(a)));
    const auto tr = diag::oscillation_trace(s, 1.0, x0, 0.3, 5);
    for (double gr : tr.gamma_ratios)
      if (gr > 1.0) ++bad_gamma;
    if (!tr.alpha_defined || !(tr.alpha > 0.0 && tr.alpha <= 1.05) || !(tr.fit_residual < 0.1)) ++bad_alpha;
    amin = std::min(amin, tr.alpha);
    amax = std::max(amax, tr.alpha);
    resmax = std::max(resmax, tr.fit_residual);
  }
  return {bad_gamma == 0 && bad_alpha == 0,
          fmt("%d centres: gamma ratios > 1: %d; alpha in [%.4f, %.4f] (need (0, 1.05]); max residual %.3g "
              "(need < 0.1)",
              centres, bad_gamma, amin, amax, resmax)};
}

Outcome criterion_13() {
  const Grid g{32, 32, 32};
  solver::SolverConfig cfg;
  cfg.kappa = 1.0;
  cfg.cfl = 0.25;
  cfg.t_final = 0.5;
  cfg.snapshot_interval = 0.05;
  cfg.project_vertical = true;
  const auto m = velocity::mg_symbol(kRef, g);
  const auto theta0 = io::random_bandlimited(g, kData, true);
  const std::vector<double> eps{1e-1, 5e-2, 2.5e-2};
  const auto rep = solver::epsilon_study(theta0, cfg, m, eps);
  std::string d = "D:";
  for (const auto& p : rep.pairs) d += fmt(" (%.3g,%.3g)=%.4g", p.eps_a, p.eps_b, p.distance);
  d += rep.distances_decreasing ? "; strictly decreasing" : "; NOT strictly decreasing";
  d += rep.uniform_bound_holds ? "; energy bound holds for every eps" : "; energy bound violated";
  return {rep.distances_decreasing && rep.uniform_bound_holds, d};
}

std::vector<char> bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion_14() {
  const auto dir = fs::temp_directory_path() / "mgsim_acceptance_io";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const Grid g{16, 16};
  const auto f = io::random_bandlimited(g, {1, 5, 1.0, 99}, false);
  io::write_snapshot(dir / "one.asf", f, 0.375, 1.0, 0.0);
  const auto back = io::read_snapshot(dir / "one.asf", g);
  const bool round_trip =
      back.time == 0.375 && std::memcmp(back.field.data(), f.data(), g.size() * sizeof(double)) == 0;

  const auto cfg = io::parse_config_text(R"({
    "grid": {"d": 3, "dims": [16, 16, 16]},
    "operator": {"mg": {"omega": 0.5, "beta2_over_eta": 1.0}},
    "solver": {"kappa": 0.5, "cfl": 0.5, "t_final": 0.2},
    "initial": {"random_bandlimited": {"k_max": 4, "amplitude": 0.1, "seed": 7}},
    "output": {"dir": "out", "snapshot_interval": 0.05}
  })");
  const auto a = io::run_to_directory(cfg, dir / "a");
  io::run_to_directory(cfg, dir / "b");
  bool identical = a.snapshots > 1;
  for (int i = 0; i < a.snapshots; ++i) {
    const auto name = io::snapshot_filename(i);
    identical = identical && bytes(dir / "a" / name) == bytes(dir / "b" / name);
  }
  identical = identical && bytes(dir / "a" / "timeseries.csv") == bytes(dir / "b" / "timeseries.csv");
  fs::remove_all(dir);
  return {round_trip && identical, fmt("snapshot round trip %s; %d snapshot files from two same-seed runs %s",
                                       round_trip ? "bit-exact" : "DIFFERS", a.snapshots,
                                       identical ? "bit-identical" : "DIFFER")};
}

struct Criterion {
  const char* title;
  double budget_s;
  std::function<Outcome()> fn;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {"symbol identities", 1.0, criterion_1},
      {"T reconstruction", 1.0, criterion_2},
      {"curved-region anisotropy", 1.0, criterion_3},
      {"single-mode exactness", 30.0, criterion_4},
      {"inviscid conservation", 60.0, criterion_5},
      {"energy law residual", 60.0, criterion_6},
      {"level-set energy inequality", 30.0, criterion_7},
      {"De Giorgi sequence", 30.0, criterion_8},
      {"L-infinity decay", 300.0, criterion_9},
      {"De Giorgi constants", 1.0, criterion_10},
      {"BMO estimator", 10.0, criterion_11},
      {"oscillation and Hoelder fit", 30.0, criterion_12},
      {"epsilon study", 300.0, criterion_13},
      {"snapshot I/O and reproducibility", 10.0, criterion_14},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 1;
    }
  }
  const auto& list = criteria();
  if (only < 0 || only > int(list.size())) {
    std::fprintf(stderr, "criterion must lie in 1..%zu\n", list.size());
    return 1;
  }

  int failed = 0;
  for (std::size_t n = 1; n <= list.size(); ++n) {
    if (only != 0 && int(n) != only) continue;
    const auto& c = list[n - 1];
    // Criteria that reuse the shared run are timed without the run itself.
    if (n == 7 || n == 8 || n == 12) shared_run();
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("[%s] criterion %zu: %s: %s; %.2f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", n, c.title,
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", EXCEEDED");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
