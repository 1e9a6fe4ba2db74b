#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "mgsim/diagnostics.hpp"
#include "mgsim/fft.hpp"

namespace mgsim::diag {
namespace {

// Mean oscillation of f over the box with corner `start` and side lengths
// `side` (in cells), wrapping periodically.
double mean_oscillation(std::span<const double> f, const std::array<int, 3>& n, const std::array<int, 3>& start,
                        const std::array<int, 3>& side, std::vector<double>& buf) {
  buf.clear();
  for (int a = 0; a < side[0]; ++a) {
    const std::size_t ia = static_cast<std::size_t>((start[0] + a) % n[0]);
    for (int b = 0; b < side[1]; ++b) {
      const std::size_t ib = ia * n[1] + static_cast<std::size_t>((start[1] + b) % n[1]);
      for (int c = 0; c < side[2]; ++c) buf.push_back(f[ib * n[2] + static_cast<std::size_t>((start[2] + c) % n[2])]);
    }
  }
  double mean = 0.0;
  for (double v : buf) mean += v;
  mean /= double(buf.size());
  double dev = 0.0;
  for (double v : buf) dev += std::abs(v - mean);
  return dev / double(buf.size());
}

}  // namespace

double bmo_norm(const PhysicalField& f, const BmoOptions& opt) {
  if (opt.min_cells < 4) throw std::invalid_argument("bmo_norm: min_cells must be >= 4");
  if (opt.offset_stride < 1) throw std::invalid_argument("bmo_norm: offset_stride must be >= 1");
  if (!f.all_finite()) throw std::invalid_argument("bmo_norm: field is not finite");
  const Grid& g = f.grid();
  const int d = g.dim();
  std::array<int, 3> n{1, 1, 1};
  // 2-d fields sit in the last two slots so the innermost loop stays contiguous.
  for (int a = 0; a < d; ++a) n[3 - d + a] = g.n(a);
  const auto v = f.values();
  std::vector<double> buf;

  double best = mean_oscillation(v, n, {0, 0, 0}, n, buf);
  for (int j = 1;; ++j) {
    std::array<int, 3> side{1, 1, 1};
    bool fits = true;
    for (int a = 3 - d; a < 3; ++a) {
      side[a] = n[a] >> j;
      if (side[a] < opt.min_cells || (side[a] << j) != n[a]) fits = false;
    }
    if (!fits) break;
    std::array<int, 3> o{0, 0, 0};
    const int st = opt.offset_stride;
    for (o[0] = 0; o[0] < n[0]; o[0] += st)
      for (o[1] = 0; o[1] < n[1]; o[1] += st)
        for (o[2] = 0; o[2] < n[2]; o[2] += st) best = std::max(best, mean_oscillation(v, n, o, side, buf));
  }
  return best;
}

std::vector<BmoDriftRow> bmo_drift_series(const SnapshotSeries& s, const velocity::TijSymbol& ts,
                                          const BmoOptions& opt) {
  const Grid& g = s.grid();
  if (!(ts.grid() == g)) throw std::invalid_argument("bmo_drift_series: symbol grid does not match the series");
  const int d = g.dim();
  std::vector<BmoDriftRow> rows;
  for (std::size_t n = 0; n < s.size(); ++n) {
    const SpectralField th = spectral::forward_transform(s.fields()[n]);
    std::vector<std::future<double>> jobs;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        jobs.push_back(std::async(std::launch::async, [&, i, j] {
          SpectralField v(g);
          for_each_mode(g, [&](std::size_t slot, const IVec& k, double) {
            for (int a = 0; a < d; ++a)
              if (2 * std::abs(k[a]) == g.n(a)) return;
            v[slot] = ts.at(k, i, j) * th[slot];
          });
          return bmo_norm(spectral::inverse_transform(v), opt);
        }));
    BmoDriftRow row;
    row.t = s.times()[n];
    row.linf = std::max(std::abs(s.fields()[n].max()), std::abs(s.fields()[n].min()));
    row.bmo_max = -1.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double b = jobs[static_cast<std::size_t>(i * d + j)].get();
        if (b > row.bmo_max) {
          row.bmo_max = b;
          row.i = i;
          row.j = j;
        }
      }
    row.ratio = row.linf > 0.0 ? row.bmo_max / row.linf : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mgsim::diag
