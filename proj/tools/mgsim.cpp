// mgsim command-line front end: run | symbols | diagnose | epsilon-study.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mgsim/config.hpp"
#include "mgsim/errors.hpp"
#include "mgsim/report_io.hpp"
#include "mgsim/snapshot_io.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3, kIo = 4 };

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral active scalar simulator with De Giorgi diagnostics"};
  app.require_subcommand(1);

  std::string config, out, snapshots, checks, epsilons;

  auto* run = app.add_subcommand("run", "integrate and write snapshots plus timeseries.csv");
  run->add_option("--config", config, "JSON run configuration")->required();
  run->add_option("--out", out, "output directory (default: output.dir from the config)");

  auto* symbols = app.add_subcommand("symbols", "symbol scan CSV");
  symbols->add_option("--config", config, "JSON run configuration")->required();
  symbols->add_option("--out", out, "CSV file")->required();

  auto* diagnose = app.add_subcommand("diagnose", "run diagnostics on a snapshot directory");
  diagnose->add_option("--snapshots", snapshots, "directory of .asf files")->required();
  diagnose->add_option("--config", config, "JSON run configuration")->required();
  diagnose->add_option("--out", out, "JSON report")->required();
  diagnose->add_option("--checks", checks, "comma-separated subset (default: diagnostics.checks)");

  auto* study = app.add_subcommand("epsilon-study", "regularised runs for a decreasing list of epsilons");
  study->add_option("--config", config, "JSON run configuration")->required();
  study->add_option("--epsilons", epsilons, "comma-separated, strictly decreasing")->required();
  study->add_option("--out", out, "CSV table, or JSON when the name ends in .json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    const auto cfg = mgsim::io::parse_config(config);
    if (run->parsed()) {
      const auto dir = out.empty() ? cfg.output_dir : std::filesystem::path(out);
      const auto sum = mgsim::io::run_to_directory(cfg, dir);
      std::printf("run: %d snapshots, %ld steps, t = %.6g -> %s\n", sum.snapshots, sum.steps, sum.final_time,
                  dir.string().c_str());
    } else if (symbols->parsed()) {
      mgsim::io::write_symbol_scan(cfg, out);
    } else if (diagnose->parsed()) {
      const auto series = mgsim::io::load_series(snapshots, mgsim::velocity::to_string(cfg.op.kind));
      const auto names = checks.empty() ? cfg.diagnostics.checks : split_names(checks);
      mgsim::io::write_text(out, mgsim::io::diagnose(series, cfg, names));
    } else if (study->parsed()) {
      std::vector<double> eps;
      try {
        eps = parse_list(epsilons);
      } catch (const std::exception& e) {
        throw mgsim::ConfigError({std::string("--epsilons: ") + e.what()});
      }
      const auto rep = mgsim::io::run_epsilon_study(cfg, eps);
      mgsim::io::write_epsilon_study(out, rep);
    }
  } catch (const mgsim::ConfigError& e) {
    std::fprintf(stderr, "mgsim: %s\n", e.what());
    return kConfig;
  } catch (const mgsim::NumericalError& e) {
    std::fprintf(stderr, "mgsim: numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const mgsim::IoError& e) {
    std::fprintf(stderr, "mgsim: i/o error: %s\n", e.what());
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "mgsim: i/o error: %s\n", e.what());
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "mgsim: %s\n", e.what());
    return kConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mgsim: %s\n", e.what());
    return kNumerical;
  }
  return kOk;
}
