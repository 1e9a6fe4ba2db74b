#include "mgsim/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mgsim::diag {

SnapshotSeries::SnapshotSeries(Grid grid, std::vector<double> times, std::vector<PhysicalField> fields,
                               SeriesMetadata meta)
    : grid_(std::move(grid)), times_(std::move(times)), fields_(std::move(fields)), meta_(std::move(meta)) {
  if (times_.size() < 2) throw std::invalid_argument("snapshot series needs at least 2 snapshots");
  if (times_.size() != fields_.size()) throw std::invalid_argument("snapshot series: times/fields size mismatch");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(fields_[i].grid() == grid_)) throw std::invalid_argument("snapshot series: fields on different grids");
    if (i > 0 && !(times_[i] > times_[i - 1]))
      throw std::invalid_argument("snapshot series: times must be strictly increasing");
  }
}

int SnapshotSeries::find(double t) const noexcept {
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  auto it = std::lower_bound(times_.begin(), times_.end(), t - tol);
  if (it != times_.end() && std::abs(*it - t) <= tol) return static_cast<int>(it - times_.begin());
  return -1;
}

PhysicalField SnapshotSeries::at(double t) const {
  if (const int i = find(t); i >= 0) return fields_[i];
  if (t < start() || t > end())
    throw std::out_of_range("time " + std::to_string(t) + " outside snapshot range");
  const auto hi = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  PhysicalField out(grid_);
  auto o = out.values();
  const auto a = fields_[lo].values();
  const auto b = fields_[hi].values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = (1.0 - w) * a[i] + w * b[i];
  return out;
}

double SnapshotSeries::global_max() const noexcept {
  double m = fields_.front().max();
  for (const auto& f : fields_) m = std::max(m, f.max());
  return m;
}

double SnapshotSeries::global_min() const noexcept {
  double m = fields_.front().min();
  for (const auto& f : fields_) m = std::min(m, f.min());
  return m;
}

SnapshotSeries SnapshotSeries::scaled(double factor) const {
  std::vector<PhysicalField> f;
  f.reserve(fields_.size());
  for (const auto& x : fields_) {
    PhysicalField y = x;
    for (auto& v : y.values()) v *= factor;
    f.push_back(std::move(y));
  }
  return SnapshotSeries(grid_, times_, std::move(f), meta_);
}

TimeNodes time_nodes(const SnapshotSeries& s, double a, double b) {
  if (!(a <= b)) throw std::invalid_argument("time_nodes: empty interval");
  const double tol = 1e-12 * std::max(1.0, std::abs(s.end()));
  if (a < s.start() && a >= s.start() - tol) a = s.start();
  if (b > s.end() && b <= s.end() + tol) b = s.end();
  TimeNodes n;
  const auto& ts = s.times();
  auto push = [&](double t, PhysicalField f) {
    n.times.push_back(t);
    n.fields.push_back(std::move(f));
  };
  push(a, s.at(a));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] >= a && ts[i] <= b) ++n.interior_snapshots;
    const double tol = 1e-12 * std::max(1.0, std::abs(ts[i]));
    if (ts[i] > a + tol && ts[i] < b - tol) push(ts[i], s.fields()[i]);
  }
  if (b > n.times.back()) push(b, s.at(b));
  n.weights.assign(n.times.size(), 0.0);
  for (std::size_t i = 0; i + 1 < n.times.size(); ++i) {
    const double h = n.times[i + 1] - n.times[i];
    n.weights[i] += 0.5 * h;
    n.weights[i + 1] += 0.5 * h;
  }
  return n;
}

void ParabolicCylinder::validate(const SnapshotSeries& s) const {
  if (!(r > 0.0 && r <= std::numbers::pi)) throw std::invalid_argument("cylinder radius must lie in (0, pi]");
  const double tol = 1e-12 * std::max(1.0, std::abs(t0));
  if (t0 - r * r < s.start() - tol)
    throw std::invalid_argument("cylinder reaches before the first snapshot (t0 - r^2 < start)");
  if (t0 > s.end() + tol) throw std::invalid_argument("cylinder ends after the last snapshot");
  for (int a = 0; a < s.grid().dim(); ++a)
    if (x0[a] < 0 || x0[a] >= s.grid().n(a)) throw std::invalid_argument("cylinder centre outside grid");
}

std::vector<std::size_t> ball_cells(const Grid& g, const IVec& x0, double r) {
  const int d = g.dim();
  std::array<int, kMaxDim> reach{0, 0, 0};
  for (int a = 0; a < d; ++a) reach[a] = std::min(static_cast<int>(std::floor(r / g.spacing(a))), g.n(a) / 2);
  std::vector<std::size_t> cells;
  const double r2 = r * r;
  IVec off{0, 0, 0};
  // Offsets in (-N/2, N/2] cover each periodic image exactly once.
  auto lo = [&](int a) { return std::max(-reach[a], -g.n(a) / 2 + 1); };
  for (off[0] = lo(0); off[0] <= reach[0]; ++off[0])
    for (off[1] = d > 1 ? lo(1) : 0; off[1] <= (d > 1 ? reach[1] : 0); ++off[1])
      for (off[2] = d > 2 ? lo(2) : 0; off[2] <= (d > 2 ? reach[2] : 0); ++off[2]) {
        double dist2 = 0.0;
        for (int a = 0; a < d; ++a) dist2 += std::pow(off[a] * g.spacing(a), 2);
        if (dist2 >= r2) continue;
        IVec idx{0, 0, 0};
        for (int a = 0; a < d; ++a) idx[a] = ((x0[a] + off[a]) % g.n(a) + g.n(a)) % g.n(a);
        cells.push_back(g.flatten(idx));
      }
  return cells;
}

std::vector<double> fd_grad_sq(const PhysicalField& f) {
  const Grid& g = f.grid();
  const int d = g.dim();
  const auto v = f.values();
  std::vector<double> out(g.size(), 0.0);
  std::array<std::size_t, kMaxDim> stride{1, 1, 1};
  for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * g.n(a + 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const IVec idx = g.unflatten(i);
    double acc = 0.0;
    for (int a = 0; a < d; ++a) {
      const int n = g.n(a);
      const std::size_t base = i - static_cast<std::size_t>(idx[a]) * stride[a];
      const std::size_t ip = base + static_cast<std::size_t>((idx[a] + 1) % n) * stride[a];
      const std::size_t im = base + static_cast<std::size_t>((idx[a] + n - 1) % n) * stride[a];
      const double dv = (v[ip] - v[im]) / (2.0 * g.spacing(a));
      acc += dv * dv;
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace mgsim::diag
