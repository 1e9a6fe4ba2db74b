#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mgsim/grid.hpp"
#include "mgsim/initial_data.hpp"
#include "mgsim/solver.hpp"
#include "mgsim/symbols.hpp"

namespace mgsim::io {

struct OperatorSpec {
  velocity::SymbolKind kind = velocity::SymbolKind::mg;
  velocity::MgParams mg;
  int axis = 1;
  std::filesystem::path custom_path;
};

/// Scalar data given as random modes, a snapshot file, or a list of cosines.
struct FieldSpec {
  enum class Kind { random_bandlimited, file, modes };
  Kind kind = Kind::random_bandlimited;
  RandomBandlimited random;
  std::filesystem::path path;
  std::vector<ModeSpec> modes;
};

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"energy",        "levelset", "degiorgi", "linf",       "local_energy",
                                              "second_energy", "shrink",   "bmo",      "oscillation"};
  return names;
}

struct DiagnosticsSpec {
  std::vector<std::string> checks = known_checks();
  int sample_count = 10;
  double C0 = 1.0;
  double H_constant = 4.0;
  std::optional<double> t0;  ///< De Giorgi start time; default t_final / 4
  int n_max = 8;
  int levels = 5;           ///< oscillation levels
  double r_max = 1.0;       ///< oscillation / cylinder radius
  double shrink = 0.5;      ///< r/R in the local energy check
  std::uint64_t seed = 1;   ///< sampling of centres and levels
  int bmo_min_cells = 4;
};

struct RunConfig {
  std::vector<int> dims;
  OperatorSpec op;
  double kappa = 0.0;
  double epsilon = 0.0;
  std::optional<double> dt;
  std::optional<double> cfl;
  double t_final = 1.0;
  bool dealias = true;
  bool project_vertical = false;
  std::optional<FieldSpec> forcing;
  FieldSpec initial;
  DiagnosticsSpec diagnostics;
  std::filesystem::path output_dir = "out";
  double snapshot_interval = 0.1;

  Grid grid() const { return Grid(std::span<const int>(dims)); }
};

/// Parses and validates a JSON config. Every violation is collected into one
/// ConfigError, each prefixed by its field path. Relative paths inside the
/// config resolve against `base_dir`.
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = ".");
/// Reads `path` (IoError if unreadable) and parses it.
RunConfig parse_config(const std::filesystem::path& path);

velocity::MultiplierSymbol build_symbol(const RunConfig& cfg);
PhysicalField build_field(const RunConfig& cfg, const FieldSpec& spec);
solver::SolverConfig build_solver_config(const RunConfig& cfg);

}  // namespace mgsim::io
