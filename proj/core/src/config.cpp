#include "mgsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mgsim/errors.hpp"
#include "mgsim/snapshot_io.hpp"

namespace mgsim::io {
namespace {

using nlohmann::json;

class Parser {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& what) { errors.push_back(path + ": " + what); }

  const json* object(const json& parent, const std::string& key, const std::string& path, bool required) {
    if (!parent.contains(key)) {
      if (required) fail(path, "missing field");
      return nullptr;
    }
    const json& j = parent.at(key);
    if (!j.is_object()) {
      fail(path, "must be an object");
      return nullptr;
    }
    return &j;
  }

  std::optional<double> number(const json& parent, const std::string& key, const std::string& path, bool required) {
    if (!parent.contains(key)) {
      if (required) fail(path, "missing field");
      return std::nullopt;
    }
    const json& j = parent.at(key);
    if (!j.is_number()) {
      fail(path, "must be a number");
      return std::nullopt;
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      fail(path, "must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<long long> integer(const json& parent, const std::string& key, const std::string& path,
                                   bool required) {
    if (!parent.contains(key)) {
      if (required) fail(path, "missing field");
      return std::nullopt;
    }
    const json& j = parent.at(key);
    if (!j.is_number_integer()) {
      fail(path, "must be an integer");
      return std::nullopt;
    }
    return j.get<long long>();
  }

  std::optional<bool> boolean(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) return std::nullopt;
    if (!parent.at(key).is_boolean()) {
      fail(path, "must be true or false");
      return std::nullopt;
    }
    return parent.at(key).get<bool>();
  }

  std::optional<std::string> string(const json& parent, const std::string& key, const std::string& path,
                                    bool required) {
    if (!parent.contains(key)) {
      if (required) fail(path, "missing field");
      return std::nullopt;
    }
    if (!parent.at(key).is_string() || parent.at(key).get<std::string>().empty()) {
      fail(path, "must be a non-empty string");
      return std::nullopt;
    }
    return parent.at(key).get<std::string>();
  }

  // Exactly one key of `alternatives` present in `j`; returns it.
  std::optional<std::string> one_of(const json& j, const std::vector<std::string>& alternatives,
                                    const std::string& path) {
    std::vector<std::string> present;
    for (const auto& a : alternatives)
      if (j.contains(a)) present.push_back(a);
    if (present.size() != 1) {
      std::string list;
      for (const auto& a : alternatives) list += (list.empty() ? "" : "|") + a;
      fail(path, present.empty() ? "expected one of " + list : "give exactly one of " + list);
      return std::nullopt;
    }
    return present.front();
  }
};

void parse_field_spec(Parser& p, const json& j, const std::string& path, const std::filesystem::path& base,
                      bool allow_random, FieldSpec& out) {
  std::vector<std::string> kinds{"file", "modes"};
  if (allow_random) kinds.insert(kinds.begin(), "random_bandlimited");
  const auto kind = p.one_of(j, kinds, path);
  if (!kind) return;
  const std::string sub = path + "." + *kind;
  if (*kind == "random_bandlimited") {
    out.kind = FieldSpec::Kind::random_bandlimited;
    const json* r = p.object(j, *kind, sub, true);
    if (!r) return;
    if (auto v = p.integer(*r, "k_min", sub + ".k_min", false)) out.random.k_min = static_cast<int>(*v);
    if (auto v = p.integer(*r, "k_max", sub + ".k_max", false)) out.random.k_max = static_cast<int>(*v);
    if (auto v = p.number(*r, "amplitude", sub + ".amplitude", false)) out.random.amplitude = *v;
    if (auto v = p.integer(*r, "seed", sub + ".seed", true)) {
      if (*v < 0) p.fail(sub + ".seed", "must be >= 0");
      out.random.seed = static_cast<std::uint64_t>(*v);
    }
    if (out.random.k_min < 1) p.fail(sub + ".k_min", "must be >= 1");
    if (out.random.k_max < out.random.k_min) p.fail(sub + ".k_max", "must be >= k_min");
    if (!(out.random.amplitude > 0.0)) p.fail(sub + ".amplitude", "must be > 0");
  } else if (*kind == "file") {
    out.kind = FieldSpec::Kind::file;
    const json* f = p.object(j, *kind, sub, true);
    if (!f) return;
    if (auto s = p.string(*f, "path", sub + ".path", true)) out.path = base / *s;
  } else {
    out.kind = FieldSpec::Kind::modes;
    const json& list = j.at("modes");
    if (!list.is_array() || list.empty()) {
      p.fail(sub, "must be a non-empty list");
      return;
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string mp = sub + "[" + std::to_string(i) + "]";
      if (!list[i].is_object()) {
        p.fail(mp, "must be an object with k and amplitude");
        continue;
      }
      ModeSpec m;
      const json& e = list[i];
      if (!e.contains("k") || !e.at("k").is_array()) {
        p.fail(mp + ".k", "must be a list of integers");
      } else {
        const json& k = e.at("k");
        if (k.size() < 2 || k.size() > 3) p.fail(mp + ".k", "must have 2 or 3 entries");
        for (std::size_t a = 0; a < k.size() && a < 3; ++a) {
          if (!k[a].is_number_integer()) p.fail(mp + ".k", "must be a list of integers");
          else m.k[a] = k[a].get<int>();
        }
        if (m.k == IVec{0, 0, 0}) p.fail(mp + ".k", "must be nonzero");
      }
      if (auto v = p.number(e, "amplitude", mp + ".amplitude", true)) m.amplitude = *v;
      if (auto v = p.number(e, "phase", mp + ".phase", false)) m.phase = *v;
      out.modes.push_back(m);
    }
  }
}

void check_modes_fit(Parser& p, const json& j, const std::string& path, const FieldSpec& spec,
                     const std::vector<int>& dims) {
  if (spec.kind != FieldSpec::Kind::modes) return;
  const json& list = j.at("modes");
  const int d = static_cast<int>(dims.size());
  for (std::size_t i = 0; i < spec.modes.size() && i < list.size(); ++i) {
    const std::string mp = path + ".modes[" + std::to_string(i) + "].k";
    if (list[i].is_object() && list[i].contains("k") && list[i].at("k").is_array() &&
        static_cast<int>(list[i].at("k").size()) != d) {
      p.fail(mp, "length must equal grid.d (dimension mismatch)");
      continue;
    }
    for (int a = 0; a < d; ++a)
      if (2 * std::abs(spec.modes[i].k[a]) >= dims[a]) p.fail(mp, "wavenumber not representable on the grid");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config: not valid JSON (") + e.what() + ")"});
  }
  if (!root.is_object()) throw ConfigError({"config: top level must be an object"});

  Parser p;
  RunConfig cfg;

  // grid
  int d = 0;
  if (const json* g = p.object(root, "grid", "grid", true)) {
    if (auto v = p.integer(*g, "d", "grid.d", true)) {
      d = static_cast<int>(*v);
      if (d != 2 && d != 3) p.fail("grid.d", "must be 2 or 3");
    }
    if (!g->contains("dims") || !g->at("dims").is_array()) {
      p.fail("grid.dims", "must be a list of integers");
    } else {
      for (const auto& n : g->at("dims")) {
        if (!n.is_number_integer()) {
          p.fail("grid.dims", "must be a list of integers");
          cfg.dims.clear();
          break;
        }
        cfg.dims.push_back(n.get<int>());
      }
      if ((d == 2 || d == 3) && static_cast<int>(cfg.dims.size()) != d) p.fail("grid.dims", "length must equal grid.d");
      for (int n : cfg.dims)
        if (n < 8 || n % 2 != 0) p.fail("grid.dims", "every size must be even and >= 8");
    }
  }
  const bool grid_ok = (d == 2 || d == 3) && static_cast<int>(cfg.dims.size()) == d &&
                       std::all_of(cfg.dims.begin(), cfg.dims.end(), [](int n) { return n >= 8 && n % 2 == 0; });

  // operator
  if (const json* op = p.object(root, "operator", "operator", true)) {
    if (auto kind = p.one_of(*op, {"mg", "perp_riesz", "custom", "zero"}, "operator")) {
      const std::string path = "operator." + *kind;
      const json& body = op->at(*kind);
      if (!body.is_object() && !body.is_null()) p.fail(path, "must be an object");
      const json empty = json::object();
      const json& b = body.is_object() ? body : empty;
      if (*kind == "mg") {
        cfg.op.kind = velocity::SymbolKind::mg;
        if (auto v = p.number(b, "omega", path + ".omega", false)) cfg.op.mg.omega = *v;
        if (auto v = p.number(b, "beta2_over_eta", path + ".beta2_over_eta", false)) cfg.op.mg.beta2_over_eta = *v;
        if (!(cfg.op.mg.omega > 0.0)) p.fail(path + ".omega", "must be > 0");
        if (!(cfg.op.mg.beta2_over_eta > 0.0)) p.fail(path + ".beta2_over_eta", "must be > 0");
        if (d != 0 && d != 3) p.fail(path, "requires a 3-d grid (dimension mismatch with grid.d)");
      } else if (*kind == "perp_riesz") {
        cfg.op.kind = velocity::SymbolKind::perp_riesz;
        if (auto v = p.integer(b, "axis", path + ".axis", false)) cfg.op.axis = static_cast<int>(*v);
        if (cfg.op.axis != 1 && cfg.op.axis != 2) p.fail(path + ".axis", "must be 1 or 2");
        if (d != 0 && d != 2) p.fail(path, "requires a 2-d grid (dimension mismatch with grid.d)");
      } else if (*kind == "custom") {
        cfg.op.kind = velocity::SymbolKind::custom;
        if (auto s = p.string(b, "path", path + ".path", true)) cfg.op.custom_path = base_dir / *s;
      } else {
        cfg.op.kind = velocity::SymbolKind::zero;
      }
    }
  }

  // output (read first: the solver needs the snapshot interval)
  if (const json* out = p.object(root, "output", "output", true)) {
    if (auto s = p.string(*out, "dir", "output.dir", false)) cfg.output_dir = base_dir / *s;
    if (auto v = p.number(*out, "snapshot_interval", "output.snapshot_interval", true)) cfg.snapshot_interval = *v;
    if (!(cfg.snapshot_interval > 0.0)) p.fail("output.snapshot_interval", "must be > 0");
  }

  // solver
  cfg.project_vertical = cfg.op.kind == velocity::SymbolKind::mg;
  if (const json* s = p.object(root, "solver", "solver", true)) {
    if (auto v = p.number(*s, "kappa", "solver.kappa", true)) cfg.kappa = *v;
    if (auto v = p.number(*s, "epsilon", "solver.epsilon", false)) cfg.epsilon = *v;
    cfg.dt = p.number(*s, "dt", "solver.dt", false);
    cfg.cfl = p.number(*s, "cfl", "solver.cfl", false);
    if (auto v = p.number(*s, "t_final", "solver.t_final", true)) cfg.t_final = *v;
    if (auto v = p.boolean(*s, "dealias", "solver.dealias")) cfg.dealias = *v;
    if (auto v = p.boolean(*s, "project_vertical", "solver.project_vertical")) cfg.project_vertical = *v;
    if (cfg.kappa < 0.0) p.fail("solver.kappa", "must be >= 0");
    if (cfg.epsilon < 0.0) p.fail("solver.epsilon", "must be >= 0");
    if (s->contains("dt") == s->contains("cfl")) p.fail("solver", "give exactly one of dt and cfl");
    if (cfg.dt && !(*cfg.dt > 0.0)) p.fail("solver.dt", "must be > 0");
    if (cfg.cfl && !(*cfg.cfl > 0.0 && *cfg.cfl <= 1.0)) p.fail("solver.cfl", "must lie in (0, 1]");
    if (!(cfg.t_final > 0.0)) p.fail("solver.t_final", "must be > 0");
    if (cfg.project_vertical && d != 0 && d != 3) p.fail("solver.project_vertical", "requires a 3-d grid");
    if (s->contains("forcing")) {
      if (!s->at("forcing").is_object()) {
        p.fail("solver.forcing", "must be an object");
      } else {
        FieldSpec f;
        parse_field_spec(p, s->at("forcing"), "solver.forcing", base_dir, false, f);
        if (grid_ok) check_modes_fit(p, s->at("forcing"), "solver.forcing", f, cfg.dims);
        cfg.forcing = std::move(f);
      }
    }
  }

  // initial
  if (const json* in = p.object(root, "initial", "initial", true)) {
    parse_field_spec(p, *in, "initial", base_dir, true, cfg.initial);
    if (grid_ok) {
      check_modes_fit(p, *in, "initial", cfg.initial, cfg.dims);
      if (cfg.initial.kind == FieldSpec::Kind::random_bandlimited)
        for (int n : cfg.dims)
          if (3 * cfg.initial.random.k_max > n) {
            p.fail("initial.random_bandlimited.k_max", "must be <= N/3 for every grid axis");
            break;
          }
    }
  }

  // diagnostics
  if (const json* dg = p.object(root, "diagnostics", "diagnostics", false)) {
    auto& D = cfg.diagnostics;
    if (dg->contains("checks")) {
      const json& c = dg->at("checks");
      if (!c.is_array()) {
        p.fail("diagnostics.checks", "must be a list of check names");
      } else {
        D.checks.clear();
        for (const auto& e : c) {
          const auto& names = known_checks();
          if (!e.is_string() || std::find(names.begin(), names.end(), e.get<std::string>()) == names.end())
            p.fail("diagnostics.checks", "unknown check " + e.dump());
          else
            D.checks.push_back(e.get<std::string>());
        }
      }
    }
    if (auto v = p.integer(*dg, "sample_count", "diagnostics.sample_count", false)) D.sample_count = static_cast<int>(*v);
    if (auto v = p.number(*dg, "C0", "diagnostics.C0", false)) D.C0 = *v;
    if (auto v = p.number(*dg, "H_constant", "diagnostics.H_constant", false)) D.H_constant = *v;
    if (auto v = p.number(*dg, "t0", "diagnostics.t0", false)) D.t0 = *v;
    if (auto v = p.integer(*dg, "n_max", "diagnostics.n_max", false)) D.n_max = static_cast<int>(*v);
    if (auto v = p.integer(*dg, "levels", "diagnostics.levels", false)) D.levels = static_cast<int>(*v);
    if (auto v = p.number(*dg, "r_max", "diagnostics.r_max", false)) D.r_max = *v;
    if (auto v = p.number(*dg, "shrink", "diagnostics.shrink", false)) D.shrink = *v;
    if (auto v = p.integer(*dg, "seed", "diagnostics.seed", false)) D.seed = static_cast<std::uint64_t>(*v);
    if (auto v = p.integer(*dg, "bmo_min_cells", "diagnostics.bmo_min_cells", false))
      D.bmo_min_cells = static_cast<int>(*v);
    if (D.sample_count < 1) p.fail("diagnostics.sample_count", "must be >= 1");
    if (!(D.C0 > 0.0)) p.fail("diagnostics.C0", "must be > 0");
    if (!(D.H_constant > 0.0)) p.fail("diagnostics.H_constant", "must be > 0");
    if (D.t0 && !(*D.t0 > 0.0 && *D.t0 <= cfg.t_final)) p.fail("diagnostics.t0", "must lie in (0, solver.t_final]");
    if (D.n_max < 0 || D.n_max > 12) p.fail("diagnostics.n_max", "must lie in [0, 12]");
    if (D.levels < 3) p.fail("diagnostics.levels", "must be >= 3");
    if (!(D.r_max > 0.0 && D.r_max <= 3.141592653589793)) p.fail("diagnostics.r_max", "must lie in (0, pi]");
    if (!(D.shrink > 0.0 && D.shrink < 1.0)) p.fail("diagnostics.shrink", "must lie in (0, 1)");
    if (D.bmo_min_cells < 4) p.fail("diagnostics.bmo_min_cells", "must be >= 4");
  }

  if (!p.errors.empty()) throw ConfigError(std::move(p.errors));
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

velocity::MultiplierSymbol build_symbol(const RunConfig& cfg) {
  const Grid g = cfg.grid();
  switch (cfg.op.kind) {
    case velocity::SymbolKind::mg:
      return velocity::mg_symbol(cfg.op.mg, g);
    case velocity::SymbolKind::perp_riesz:
      return velocity::perp_riesz_symbol(cfg.op.axis, g);
    case velocity::SymbolKind::custom:
      try {
        return read_symbol(cfg.op.custom_path, g);
      } catch (const std::invalid_argument& e) {
        throw ConfigError({"operator.custom.path: " + std::string(e.what())});
      }
    case velocity::SymbolKind::zero:
      break;
  }
  return velocity::zero_symbol(g);
}

PhysicalField build_field(const RunConfig& cfg, const FieldSpec& spec) {
  const Grid g = cfg.grid();
  switch (spec.kind) {
    case FieldSpec::Kind::random_bandlimited:
      return random_bandlimited(g, spec.random, cfg.project_vertical);
    case FieldSpec::Kind::file:
      return read_snapshot(spec.path, g).field;
    case FieldSpec::Kind::modes:
      break;
  }
  return modes_field(g, spec.modes);
}

solver::SolverConfig build_solver_config(const RunConfig& cfg) {
  solver::SolverConfig s;
  s.kappa = cfg.kappa;
  s.epsilon = cfg.epsilon;
  s.dt = cfg.dt;
  s.cfl = cfg.cfl;
  s.t_final = cfg.t_final;
  s.dealias = cfg.dealias;
  s.project_vertical = cfg.project_vertical;
  s.snapshot_interval = cfg.snapshot_interval;
  if (cfg.forcing) s.forcing = build_field(cfg, *cfg.forcing);
  return s;
}

}  // namespace mgsim::io
