#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mgsim/config.hpp"
#include "mgsim/errors.hpp"
#include "mgsim/fft.hpp"
#include "mgsim/initial_data.hpp"
#include "mgsim/snapshot_io.hpp"

using namespace mgsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mgsim_test_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kMinimal = R"({
  "grid": {"d": 3, "dims": [32, 32, 32]},
  "operator": {"mg": {"omega": 0.5, "beta2_over_eta": 1.0}},
  "solver": {"kappa": 1.0, "cfl": 0.5, "t_final": 0.5},
  "initial": {"random_bandlimited": {"seed": 7}},
  "output": {"dir": "out", "snapshot_interval": 0.1}
})";

bool mentions(const ConfigError& e, const std::string& needle) {
  for (const auto& v : e.violations())
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("minimal MG config") {
  const auto c = io::parse_config_text(kMinimal);
  CHECK(c.dims == std::vector<int>{32, 32, 32});
  CHECK(c.op.kind == velocity::SymbolKind::mg);
  CHECK(c.op.mg.omega == 0.5);
  CHECK(c.kappa == 1.0);
  CHECK(c.initial.random.seed == 7u);
  CHECK(c.project_vertical);
  CHECK(c.diagnostics.checks.size() == io::known_checks().size());
  CHECK(c.diagnostics.H_constant == 4.0);
}

TEST_CASE("config errors carry field paths") {
  std::string bad = kMinimal;
  bad.replace(bad.find("\"omega\": 0.5"), 12, "\"omega\": -1");
  try {
    io::parse_config_text(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "operator.mg.omega"));
  }

  std::string perp = kMinimal;
  perp.replace(perp.find("{\"mg\""), std::strlen("{\"mg\": {\"omega\": 0.5, \"beta2_over_eta\": 1.0}}"),
               "{\"perp_riesz\": {\"axis\": 1}}");
  try {
    io::parse_config_text(perp);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "dimension mismatch"));
  }

  const char* many = R"({
    "grid": {"d": 3, "dims": [32, 31, 32]},
    "operator": {"mg": {"omega": 0, "beta2_over_eta": 1.0}},
    "solver": {"cfl": 2.0, "t_final": -1},
    "initial": {"random_bandlimited": {}},
    "output": {"dir": "out"}
  })";
  try {
    io::parse_config_text(many);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations().size() >= 6);
    CHECK(mentions(e, "grid.dims"));
    CHECK(mentions(e, "solver.kappa"));
    CHECK(mentions(e, "solver.cfl"));
    CHECK(mentions(e, "solver.t_final"));
    CHECK(mentions(e, "initial.random_bandlimited.seed"));
    CHECK(mentions(e, "output.snapshot_interval"));
  }
  CHECK_THROWS_AS(io::parse_config_text("{not json"), ConfigError);
  CHECK_THROWS_AS(io::parse_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("snapshot round trip is bit exact") {
  const auto dir = scratch("snap");
  const Grid g{16, 16};
  const auto f = io::random_bandlimited(g, {1, 5, 1.0, 3}, false);
  const auto path = dir / io::snapshot_filename(0);
  CHECK(path.filename() == "snap_00000.asf");
  io::write_snapshot(path, f, 0.125, 0.5, 0.01);
  const auto s = io::read_snapshot(path, g);
  CHECK(s.time == 0.125);
  CHECK(s.kappa == 0.5);
  CHECK(s.epsilon == 0.01);
  REQUIRE(s.field.grid() == g);
  CHECK(std::memcmp(s.field.data(), f.data(), g.size() * sizeof(double)) == 0);
  CHECK_THROWS_AS(io::read_snapshot(path, Grid{16, 32}), IoError);
}

TEST_CASE("corrupt snapshots are rejected") {
  const auto dir = scratch("corrupt");
  const Grid g{8, 8};
  const auto path = dir / "a.asf";
  io::write_snapshot(path, PhysicalField(g), 0.0, 1.0, 0.0);
  {
    std::fstream io(path, std::ios::in | std::ios::out | std::ios::binary);
    io.seekp(0);
    io.write("XSF1", 4);
  }
  try {
    io::read_snapshot(path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("bad magic") != std::string::npos);
  }
  io::write_snapshot(path, PhysicalField(g), 0.0, 1.0, 0.0);
  fs::resize_file(path, fs::file_size(path) - 8);
  try {
    io::read_snapshot(path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("truncated") != std::string::npos);
  }
  CHECK_THROWS_AS(io::read_snapshot(dir / "missing.asf"), IoError);
}

TEST_CASE("series loads in time order") {
  const auto dir = scratch("series");
  const Grid g{8, 8};
  PhysicalField f(g);
  for (int i = 0; i < 3; ++i) {
    for (auto& v : f.values()) v = i;
    io::write_snapshot(dir / io::snapshot_filename(2 - i), f, 0.1 * i, 0.3, 0.0);
  }
  const auto s = io::load_series(dir, "mg");
  REQUIRE(s.size() == 3);
  CHECK(s.times()[2] == doctest::Approx(0.2));
  CHECK(s.fields()[2][0] == 2.0);
  CHECK(s.metadata().kappa == 0.3);
  CHECK_THROWS_AS(io::load_series(dir / "nope"), IoError);
}

TEST_CASE("symbol table round trip") {
  const auto dir = scratch("symbol");
  const Grid g{8, 8, 8};
  const auto m = velocity::mg_symbol({0.5, 1.0}, g);
  io::write_symbol(dir / "m.msy", m);
  const auto back = io::read_symbol(dir / "m.msy", g);
  CHECK(back.kind() == velocity::SymbolKind::custom);
  REQUIRE(back.table().size() == m.table().size());
  CHECK(std::memcmp(back.table().data(), m.table().data(), m.table().size() * sizeof(Complex)) == 0);
  CHECK_THROWS_AS(io::read_symbol(dir / "m.msy", Grid{8, 8, 16}), IoError);
}

TEST_CASE("random band-limited data") {
  const io::RandomBandlimited p{1, 8, 1.0, 42};
  const auto a = io::random_bandlimited(Grid{32, 32, 32}, p, true);
  const auto b = io::random_bandlimited(Grid{32, 32, 32}, p, true);
  CHECK(std::memcmp(a.data(), b.data(), a.grid().size() * sizeof(double)) == 0);

  const auto other = io::random_bandlimited(Grid{32, 32, 32}, {1, 8, 1.0, 43}, true);
  CHECK(std::memcmp(a.data(), other.data(), a.grid().size() * sizeof(double)) != 0);

  // The same function at a finer resolution.
  const Grid fine{48, 48, 48};
  const auto c = io::random_bandlimited(fine, p, true);
  double worst = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      for (int k = 0; k < 16; ++k)
        worst = std::max(worst, std::abs(a[a.grid().flatten({2 * i, 2 * j, 2 * k})] -
                                         c[fine.flatten({3 * i, 3 * j, 3 * k})]));
  CHECK(worst < 1e-12);

  const auto h = spectral::forward_transform(a);
  double plane = 0.0, outside = 0.0;
  for_each_mode(a.grid(), [&](std::size_t s, const IVec& k, double) {
    if (k[2] == 0) plane = std::max(plane, std::abs(h[s]));
    const double n = std::sqrt(norm2(k));
    if (n < 1.0 || n > 8.0) outside = std::max(outside, std::abs(h[s]));
  });
  CHECK(plane < 1e-15);
  CHECK(outside < 1e-14);
  CHECK_THROWS_AS(io::random_bandlimited(Grid{16, 16, 16}, p, true), std::invalid_argument);
  CHECK(io::mix64(0) != io::mix64(1));
}

TEST_CASE("cosine modes") {
  const Grid g{16, 16};
  const std::vector<io::ModeSpec> modes{{{1, 2, 0}, 0.5, 0.25}};
  const auto f = io::modes_field(g, modes);
  const RVec x = g.position(37);
  CHECK(f[37] == doctest::Approx(0.5 * std::cos(x[0] + 2 * x[1] + 0.25)).epsilon(1e-14));
}
