#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mgsim/diagnostics.hpp"

namespace mgsim::diag {
namespace {

PhysicalField truncated(const PhysicalField& f, double sign, double h) {
  PhysicalField out(f.grid());
  auto o = out.values();
  const auto v = f.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::max(sign * v[i] - h, 0.0);
  return out;
}

double sum_sq(const PhysicalField& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v * v;
  return acc * f.grid().cell_volume();
}

double sum_sq(const PhysicalField& f, const std::vector<std::size_t>& cells) {
  double acc = 0.0;
  for (auto c : cells) acc += f[c] * f[c];
  return acc * f.grid().cell_volume();
}

double grad_sq(const PhysicalField& f) {
  double acc = 0.0;
  for (double v : fd_grad_sq(f)) acc += v;
  return acc * f.grid().cell_volume();
}

double grad_sq(const PhysicalField& f, const std::vector<std::size_t>& cells) {
  const auto g = fd_grad_sq(f);
  double acc = 0.0;
  for (auto c : cells) acc += g[c];
  return acc * f.grid().cell_volume();
}

double max_over(const PhysicalField& f, const std::vector<std::size_t>& cells) {
  double m = -std::numeric_limits<double>::infinity();
  for (auto c : cells) m = std::max(m, f[c]);
  return m;
}

double min_over(const PhysicalField& f, const std::vector<std::size_t>& cells) {
  double m = std::numeric_limits<double>::infinity();
  for (auto c : cells) m = std::min(m, f[c]);
  return m;
}

double trapezoid(const TimeNodes& n, const std::vector<double>& q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) acc += n.weights[i] * q[i];
  return acc;
}

// Trapezoid on every other node (always keeping both ends).
double trapezoid_coarse(const TimeNodes& n, const std::vector<double>& q) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < q.size(); i += 2) keep.push_back(i);
  if (keep.back() != q.size() - 1) keep.push_back(q.size() - 1);
  double acc = 0.0;
  for (std::size_t a = 0; a + 1 < keep.size(); ++a)
    acc += 0.5 * (n.times[keep[a + 1]] - n.times[keep[a]]) * (q[keep[a]] + q[keep[a + 1]]);
  return acc;
}

void check_window(const SnapshotSeries& s, double t1, double t2) {
  const double tol = 1e-12 * std::max(1.0, std::abs(s.end()));
  if (!(t1 < t2)) throw std::invalid_argument("time window needs t1 < t2");
  if (t1 < s.start() - tol || t2 > s.end() + tol)
    throw std::invalid_argument("time window outside snapshot range");
}

double clamp_time(const SnapshotSeries& s, double t) { return std::clamp(t, s.start(), s.end()); }

void finish(InequalityReport& r) {
  r.satisfied = r.lhs <= r.rhs * (1.0 + r.rel_tol) + r.abs_tol + r.slack;
}

void require_cylinder_nodes(const TimeNodes& n) {
  if (n.interior_snapshots < 3)
    throw std::invalid_argument("cylinder holds fewer than 3 snapshots (" + std::to_string(n.interior_snapshots) +
                                ")");
}

}  // namespace

InequalityReport level_set_energy_check(const SnapshotSeries& s, double h, double t1, double t2, Sign sign) {
  check_window(s, t1, t2);
  t1 = clamp_time(s, t1);
  t2 = clamp_time(s, t2);
  const double sg = sign == Sign::plus ? 1.0 : -1.0;
  const double kappa = s.metadata().kappa;
  const TimeNodes nodes = time_nodes(s, t1, t2);

  std::vector<double> g(nodes.fields.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = grad_sq(truncated(nodes.fields[i], sg, h));
  const double a1 = sum_sq(truncated(nodes.fields.front(), sg, h));
  const double a2 = sum_sq(truncated(nodes.fields.back(), sg, h));
  const double G = trapezoid(nodes, g);

  InequalityReport r;
  r.name = "level_set_energy";
  r.lhs = a2 + 2.0 * kappa * G;
  r.rhs = a1;
  r.abs_tol = 1e-6 * sum_sq(s.fields().front());
  r.slack = g.size() >= 3 ? 2.0 * kappa * std::abs(G - trapezoid_coarse(nodes, g)) / 3.0 : 0.0;
  r.degenerate = a1 == 0.0 && a2 == 0.0 && G == 0.0;
  r.empirical_constant = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  r.context = {{"h", h},
               {"t1", t1},
               {"t2", t2},
               {"sign", sg},
               {"kappa", kappa},
               {"dissipation", 2.0 * kappa * G},
               {"time_nodes", double(nodes.times.size())}};
  if (r.degenerate) r.notes.emplace_back("level sets empty on the whole window");
  finish(r);
  return r;
}

DeGiorgiSequence degiorgi_sequence(const SnapshotSeries& s, double t0, double H, int n_max) {
  if (!(t0 > 0.0)) throw std::invalid_argument("degiorgi_sequence: t0 must be > 0");
  if (!(H > 0.0)) throw std::invalid_argument("degiorgi_sequence: H must be > 0");
  if (n_max < 0 || n_max > 12) throw std::invalid_argument("degiorgi_sequence: n_max must lie in [0, 12]");
  if (std::abs(s.start()) > 1e-12 || t0 > s.end())
    throw std::invalid_argument("degiorgi_sequence: insufficient snapshot coverage (need [0, t0] at least)");
  const double kappa = s.metadata().kappa;

  DeGiorgiSequence out;
  out.t0 = t0;
  out.H = H;
  for (int n = 0; n <= n_max; ++n) {
    const double scale = 1.0 - std::ldexp(1.0, -n);
    const double tn = t0 * scale;
    const double hn = H * scale;
    const TimeNodes nodes = time_nodes(s, tn, s.end());
    double sup = 0.0;
    std::vector<double> g(nodes.fields.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const PhysicalField tr = truncated(nodes.fields[i], 1.0, hn);
      sup = std::max(sup, sum_sq(tr));
      g[i] = grad_sq(tr);
    }
    out.times.push_back(tn);
    out.levels.push_back(hn);
    out.c.push_back(sup + 2.0 * kappa * trapezoid(nodes, g));
  }
  out.nonincreasing = std::is_sorted(out.c.rbegin(), out.c.rend());
  return out;
}

double degiorgi_level(const SnapshotSeries& s, double t0, double C) {
  const double c0 = degiorgi_sequence(s, t0, 1.0, 0).c.front();
  return C * std::sqrt(c0) / std::pow(t0, s.grid().dim() / 4.0);
}

LinfDecay linf_decay_check(const SnapshotSeries& s) {
  if (std::abs(s.start()) > 1e-12) throw std::invalid_argument("linf_decay_check: first snapshot must be at t = 0");
  const double l2 = std::sqrt(sum_sq(s.fields().front()));
  if (!(l2 > 0.0)) throw std::invalid_argument("linf_decay_check: zero initial data");
  const double q = s.grid().dim() / 4.0;
  LinfDecay out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    LinfDecayRow row;
    row.t = s.times()[i];
    row.linf = std::max(std::abs(s.fields()[i].max()), std::abs(s.fields()[i].min()));
    row.ratio = std::pow(row.t, q) * row.linf / l2;
    if (row.t > 0.0) out.sup_ratio = std::max(out.sup_ratio, row.ratio);
    out.rows.push_back(row);
  }
  return out;
}

InequalityReport local_energy_check(const SnapshotSeries& s, const velocity::TijSymbol& ts,
                                    const ParabolicCylinder& outer, double shrink, double h, double C) {
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("local_energy_check: shrink must lie in (0, 1)");
  outer.validate(s);
  const double R = outer.r;
  const double r = shrink * R;
  const int d = s.grid().dim();
  const TimeNodes big = time_nodes(s, outer.t0 - R * R, outer.t0);
  require_cylinder_nodes(big);
  const TimeNodes small = time_nodes(s, outer.t0 - r * r, outer.t0);
  const auto ball_R = ball_cells(s.grid(), outer.x0, R);
  const auto ball_r = ball_cells(s.grid(), outer.x0, r);

  double sup_small = 0.0;
  std::vector<double> g(small.fields.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const PhysicalField tr = truncated(small.fields[i], 1.0, h);
    sup_small = std::max(sup_small, sum_sq(tr, ball_r));
    g[i] = grad_sq(tr, ball_r);
  }
  double linf = 0.0;
  std::vector<double> l2(big.fields.size());
  for (std::size_t i = 0; i < l2.size(); ++i) {
    const PhysicalField tr = truncated(big.fields[i], 1.0, h);
    l2[i] = sum_sq(tr, ball_R);
    linf = std::max(linf, max_over(tr, ball_R));
  }
  const double l2_sq = trapezoid(big, l2);
  const double p = 1.0 / (d + 2.0);
  const double factor = R / ((R - r) * (R - r)) * std::pow(l2_sq, 1.0 - p) * std::pow(linf, 2.0 * p);

  InequalityReport rep;
  rep.name = "local_energy";
  rep.lhs = sup_small + trapezoid(small, g);
  rep.rhs = C * factor;
  rep.rel_tol = 1e-9;
  rep.degenerate = factor == 0.0 && rep.lhs == 0.0;
  rep.empirical_constant = factor > 0.0 ? rep.lhs / factor : 0.0;
  rep.context = {{"t0", outer.t0}, {"R", R},        {"r", r},           {"h", h},
                 {"C", C},         {"l2_sq_QR", l2_sq}, {"linf_QR", linf}, {"tij_sup", ts.sup_norm()}};
  if (rep.degenerate) rep.notes.emplace_back("truncation vanishes on the cylinder");
  finish(rep);
  return rep;
}

InequalityReport second_energy_check(const SnapshotSeries& s, const velocity::TijSymbol& ts, const IVec& x0,
                                     double r, double R, double t1, double t2, double h, double C) {
  if (!(r > 0.0 && r < R && R <= std::numbers::pi))
    throw std::invalid_argument("second_energy_check: need 0 < r < R <= pi");
  check_window(s, t1, t2);
  t1 = clamp_time(s, t1);
  t2 = clamp_time(s, t2);
  const int d = s.grid().dim();
  const auto ball_R = ball_cells(s.grid(), x0, R);
  const auto ball_r = ball_cells(s.grid(), x0, r);
  const TimeNodes nodes = time_nodes(s, t1, t2);

  double linf = 0.0;
  for (const auto& f : nodes.fields) linf = std::max(linf, max_over(truncated(f, 1.0, h), ball_R));
  const double lhs = sum_sq(truncated(nodes.fields.back(), 1.0, h), ball_r);
  const double first = sum_sq(truncated(nodes.fields.front(), 1.0, h), ball_R);
  const double factor = std::pow(R, d) * (t2 - t1) / ((R - r) * (R - r)) * linf * linf;

  InequalityReport rep;
  rep.name = "second_energy";
  rep.lhs = lhs;
  rep.rhs = first + C * factor;
  rep.rel_tol = 1e-9;
  rep.degenerate = lhs == 0.0 && first == 0.0 && factor == 0.0;
  rep.empirical_constant = factor > 0.0 ? std::max(0.0, lhs - first) / factor : 0.0;
  rep.context = {{"r", r},   {"R", R}, {"t1", t1},         {"t2", t2},
                 {"h", h},   {"C", C}, {"first_term", first}, {"linf", linf},
                 {"tij_sup", ts.sup_norm()}};
  if (rep.degenerate) rep.notes.emplace_back("truncation vanishes on the window");
  finish(rep);
  return rep;
}

DeGiorgiConstants degiorgi_constants(int d, double C0) {
  if (d != 2 && d != 3) throw std::invalid_argument("degiorgi_constants: d must be 2 or 3");
  if (!(C0 > 0.0) || !std::isfinite(C0)) throw std::invalid_argument("degiorgi_constants: C0 must be > 0");
  DeGiorgiConstants c;
  c.d = d;
  c.C0 = C0;
  c.kappa0 = std::pow(0.8, 1.0 / d);
  const double bound = std::sqrt(1.2);
  c.n0 = 2;
  while (std::ldexp(1.0, c.n0) / (std::ldexp(1.0, c.n0) - 2.0) > bound) ++c.n0;
  c.delta0 = (1.0 - c.kappa0) * (1.0 - c.kappa0) / (12.0 * C0 * c.kappa0 * c.kappa0);
  return c;
}

InequalityReport level_set_shrink_check(const SnapshotSeries& s, const ShrinkParams& p, double C0) {
  const Grid& g = s.grid();
  const DeGiorgiConstants k = degiorgi_constants(g.dim(), C0);
  if (!(p.R > 0.0 && p.R <= std::numbers::pi)) throw std::invalid_argument("level_set_shrink_check: R must lie in (0, pi]");
  const double r = k.kappa0 * p.R;
  const double t_end = p.t1 + k.delta0 * p.R * p.R;
  const double tol = 1e-12 * std::max(1.0, std::abs(t_end));
  if (p.t1 < s.start() - tol || t_end > s.end() + tol)
    throw std::invalid_argument("level_set_shrink_check: snapshots do not cover [t1, t1 + delta0 R^2]");

  const auto ball_R = ball_cells(g, p.x0, p.R);
  const auto ball_r = ball_cells(g, p.x0, r);
  const TimeNodes window = time_nodes(s, p.t1, std::min(t_end, s.end()));
  double M = -std::numeric_limits<double>::infinity();
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : window.fields) {
    M = std::max(M, max_over(f, ball_R));
    m = std::min(m, min_over(f, ball_R));
  }
  const double h = 0.5 * (M + m);
  const double H = M - (M - m) / std::ldexp(1.0, k.n0);

  auto fraction = [](const PhysicalField& f, const std::vector<std::size_t>& cells, double level) {
    std::size_t n = 0;
    for (auto c : cells) n += f[c] >= level ? 1 : 0;
    return double(n) / double(cells.size());
  };

  InequalityReport rep;
  rep.name = "level_set_shrink";
  rep.rhs = 7.0 / 8.0;
  const double hyp = fraction(window.fields.front(), ball_r, h);
  rep.applicable = hyp <= 0.5;
  const TimeNodes concl = time_nodes(s, p.t1, std::min(p.t1 + k.delta0 * r * r, s.end()));
  double worst = 0.0;
  for (const auto& f : concl.fields) worst = std::max(worst, fraction(f, ball_R, H));
  rep.lhs = worst;
  rep.degenerate = M == m;
  rep.empirical_constant = worst / rep.rhs;
  rep.context = {{"t1", p.t1},
                 {"R", p.R},
                 {"r", r},
                 {"M", M},
                 {"m", m},
                 {"h", h},
                 {"H", H},
                 {"kappa0", k.kappa0},
                 {"n0", double(k.n0)},
                 {"delta0", k.delta0},
                 {"hypothesis_fraction", hyp},
                 {"conclusion_fraction", worst},
                 {"cells_B_r", double(ball_r.size())},
                 {"cells_B_R", double(ball_R.size())}};
  if (rep.degenerate) rep.notes.emplace_back("zero oscillation on the window");
  if (!rep.applicable) rep.notes.emplace_back("hypothesis fails: level set at h fills more than half of B_r");
  finish(rep);
  return rep;
}

OscillationTrace oscillation_trace(const SnapshotSeries& s, double t0, const IVec& x0, double r_max, int levels) {
  if (levels < 3) throw std::invalid_argument("oscillation_trace: need at least 3 levels");
  const double kappa0 = degiorgi_constants(s.grid().dim()).kappa0;
  OscillationTrace tr;
  tr.t0 = t0;
  tr.x0 = x0;
  for (int j = 0; j < levels; ++j) {
    const double r = r_max * std::pow(kappa0, j);
    ParabolicCylinder{t0, x0, r}.validate(s);
    const TimeNodes nodes = time_nodes(s, t0 - r * r, t0);
    const auto cells = ball_cells(s.grid(), x0, r);
    double M = -std::numeric_limits<double>::infinity();
    double m = std::numeric_limits<double>::infinity();
    for (const auto& f : nodes.fields) {
      M = std::max(M, max_over(f, cells));
      m = std::min(m, min_over(f, cells));
    }
    tr.radii.push_back(r);
    tr.sup.push_back(M);
    tr.inf.push_back(m);
    tr.osc.push_back(M - m);
  }
  for (std::size_t j = 1; j < tr.osc.size(); ++j) {
    if (tr.osc[j] > tr.osc[j - 1] * (1.0 + 1e-12) + 1e-300)
      throw std::logic_error("oscillation_trace: osc increased under a nested cylinder");
    tr.gamma_ratios.push_back(tr.osc[j - 1] > 0.0 ? tr.osc[j] / tr.osc[j - 1] : 0.0);
  }

  std::vector<double> x, y;
  for (std::size_t j = 0; j < tr.osc.size(); ++j)
    if (tr.osc[j] >= 1e-12) {
      x.push_back(std::log(tr.radii[j]));
      y.push_back(std::log(tr.osc[j]));
    }
  tr.degenerate = tr.osc.front() < 1e-12;
  if (x.size() >= 2) {
    const double n = double(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
    }
    tr.alpha = sxy / sxx;
    double res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - (my + tr.alpha * (x[i] - mx));
      res += e * e;
    }
    tr.fit_residual = std::sqrt(res / n);
    tr.alpha_defined = true;
  }
  return tr;
}

}  // namespace mgsim::diag
