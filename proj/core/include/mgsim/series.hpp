#pragma once

#include <string>
#include <vector>

#include "mgsim/grid.hpp"

namespace mgsim::diag {

struct SeriesMetadata {
  double kappa = 1.0;
  double epsilon = 0.0;
  std::string operator_kind = "unknown";
};

/// Time-ordered snapshots of θ on one grid. Between snapshots θ is taken to be
/// linear in time.
class SnapshotSeries {
 public:
  SnapshotSeries(Grid grid, std::vector<double> times, std::vector<PhysicalField> fields,
                 SeriesMetadata meta = {});

  const Grid& grid() const noexcept { return grid_; }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<PhysicalField>& fields() const noexcept { return fields_; }
  const SeriesMetadata& metadata() const noexcept { return meta_; }
  std::size_t size() const noexcept { return times_.size(); }
  double start() const noexcept { return times_.front(); }
  double end() const noexcept { return times_.back(); }

  /// θ(t) by linear interpolation; t must lie in [start, end].
  PhysicalField at(double t) const;
  /// Index of a snapshot whose time equals t to 1e-12 relative, or -1.
  int find(double t) const noexcept;

  double global_max() const noexcept;
  double global_min() const noexcept;

  /// Same series with every field multiplied by `factor`.
  SnapshotSeries scaled(double factor) const;

 private:
  Grid grid_;
  std::vector<double> times_;
  std::vector<PhysicalField> fields_;
  SeriesMetadata meta_;
};

/// Quadrature nodes for ∫_a^b q(t) dt: a, every snapshot strictly inside, and b,
/// with trapezoid weights. Fields at a and b are interpolated when needed.
struct TimeNodes {
  std::vector<double> times;
  std::vector<double> weights;
  std::vector<PhysicalField> fields;
  int interior_snapshots = 0;  ///< snapshots with a <= t <= b
};

TimeNodes time_nodes(const SnapshotSeries& s, double a, double b);

/// Q_r(t0, x0) = [t0 - r², t0] × B_r(x0) on the torus.
struct ParabolicCylinder {
  double t0 = 0.0;
  IVec x0{0, 0, 0};  ///< grid multi-index of the centre
  double r = 1.0;

  /// r ∈ (0, π] and t0 - r² >= first snapshot time.
  void validate(const SnapshotSeries& s) const;
};

/// Flat indices of cells whose centres lie within periodic distance < r of x0.
std::vector<std::size_t> ball_cells(const Grid& g, const IVec& x0, double r);

/// Central-difference |∇f|² at every cell (periodic, second order).
std::vector<double> fd_grad_sq(const PhysicalField& f);

}  // namespace mgsim::diag
