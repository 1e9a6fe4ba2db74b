#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mgsim/grid.hpp"
#include "mgsim/series.hpp"
#include "mgsim/symbols.hpp"

namespace mgsim::io {

/// ASF1 snapshot: "ASF1", u32 version = 1, u32 d, u32 dims[d], f64 time,
/// f64 kappa, f64 epsilon, then the samples as f64, row-major, last axis
/// fastest. All little-endian.
struct Snapshot {
  PhysicalField field;
  double time = 0.0;
  double kappa = 0.0;
  double epsilon = 0.0;
};

void write_snapshot(const std::filesystem::path& path, const PhysicalField& f, double time, double kappa,
                    double epsilon);
/// Throws IoError on "bad magic", "truncated" files, unsupported versions or,
/// when `expect` is given, a grid mismatch.
Snapshot read_snapshot(const std::filesystem::path& path, const std::optional<Grid>& expect = std::nullopt);

/// snap_00000.asf, snap_00001.asf, ...
std::string snapshot_filename(int index);

/// Every *.asf file in `dir`, ordered by snapshot time.
diag::SnapshotSeries load_series(const std::filesystem::path& dir, const std::string& operator_kind = "unknown");

/// MSY1 symbol table: "MSY1", u32 version = 1, u32 d, u32 dims[d], then for
/// every mode of the full spectrum in FFT index order (row-major, index i ↦
/// k = i or i - N) the d components M̂_j(k) as (re, im) f64 pairs.
void write_symbol(const std::filesystem::path& path, const velocity::MultiplierSymbol& m);
/// Reads a table (IoError on malformed files or a grid mismatch) and validates
/// it as a custom symbol (std::invalid_argument unless divergence free and real).
velocity::MultiplierSymbol read_symbol(const std::filesystem::path& path, const Grid& expect);

}  // namespace mgsim::io
