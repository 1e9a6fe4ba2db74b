#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mgsim/config.hpp"
#include "mgsim/diagnostics.hpp"
#include "mgsim/solver.hpp"

namespace mgsim::io {

// JSON text for each diagnostics result; every struct field is emitted.
std::string to_json(const diag::InequalityReport& r);
std::string to_json(const diag::DeGiorgiSequence& s);
std::string to_json(const diag::LinfDecay& l);
std::string to_json(const diag::OscillationTrace& t);
std::string to_json(const diag::DeGiorgiConstants& c);
std::string to_json(std::span<const diag::BmoDriftRow> rows);
std::string to_json(const solver::EpsilonStudyReport& r);

/// One row of the run time series.
struct TimeseriesRow {
  double t = 0.0;
  double l2 = 0.0;               ///< ‖θ‖₂
  double h1_seminorm = 0.0;      ///< ‖∇θ‖₂
  double linf = 0.0;             ///< ‖θ‖∞
  double energy_residual = 0.0;  ///< EnergyBudget::residual
};

TimeseriesRow timeseries_row(const solver::SolverState& s, const solver::SolverConfig& cfg);

/// Columns t,L2,H1_seminorm,Linf,energy_residual; values printed round-trip exact.
void write_timeseries_csv(const std::filesystem::path& path, std::span<const TimeseriesRow> rows);

struct RunSummary {
  int snapshots = 0;
  long steps = 0;
  double final_time = 0.0;
  std::vector<TimeseriesRow> rows;
};

/// Runs the configured simulation, writing snap_NNNNN.asf files and
/// timeseries.csv into `out_dir` (created if needed).
RunSummary run_to_directory(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Symbol scan as CSV: `# key=value` lines for the divergence defect, reality
/// defect, growth constant and T reconstruction defect, then (MG only) the
/// curved-region table k1,k2,k3,abs_m1,abs_m2,abs_m3,m2_over_k1 at σ = 1/2.
void write_symbol_scan(const RunConfig& cfg, const std::filesystem::path& path);

/// Runs the selected checks on a series; returns the JSON report. The report
/// has "all_satisfied" over every applicable inequality report.
std::string diagnose(const diag::SnapshotSeries& s, const RunConfig& cfg, std::span<const std::string> checks);

/// Regularised runs from the configured initial data. Output is JSON when the
/// path ends in ".json", otherwise a CSV table with one row per ε and the
/// distance to the next smaller ε.
solver::EpsilonStudyReport run_epsilon_study(const RunConfig& cfg, std::span<const double> eps);
void write_epsilon_study(const std::filesystem::path& path, const solver::EpsilonStudyReport& r);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mgsim::io
