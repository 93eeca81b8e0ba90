// qchaos <experiment> --config <path> [--seed S] [--dim N] [--f F] [--hbar H] [--out DIR]

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "qchaos/runner/config.hpp"
#include "qchaos/runner/csv.hpp"
#include "qchaos/runner/runner.hpp"

namespace {

std::string key_help() {
  std::string out = "Config keys (key = value, one per line, '#' comments):\n";
  for (const auto& [key, doc] : qchaos::runner::config_keys()) {
    out += "  " + key + std::string(key.size() < 18 ? 18 - key.size() : 1, ' ') + doc + "\n";
  }
  out += "\nExit codes: 0 success, 2 config error, 3 numeric failure, 4 I/O failure.\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qchaos;
  using namespace qchaos::runner;

  CLI::App app{"Entropy production and random-matrix diagnostics for quantum chaos"};
  app.footer(key_help());

  std::string experiment;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> dim;
  std::optional<double> f;
  std::optional<double> hbar;
  std::optional<std::string> out;

  app.add_option("experiment", experiment, "spin_evolve | baker_evolve | spectrum | levels | residuals | sweep_f")
      ->required();
  app.add_option("--config", config_path, "experiment config file");
  app.add_option("--seed", seed, "override master seed");
  app.add_option("--dim", dim, "override matrix dimension");
  app.add_option("--f", f, "override correlation fraction f");
  app.add_option("--hbar", hbar, "override hbar");
  app.add_option("--out", out, "override output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto requested = parse_experiment(experiment);
    if (!requested) throw Error(ErrorKind::Config, "unknown experiment '" + experiment + "'");
    ExperimentConfig base;
    base.experiment = *requested;
    ExperimentConfig cfg = config_path.empty() ? base : load_config(config_path, base);
    if (!config_path.empty() && cfg.experiment != *requested) {
      throw Error(ErrorKind::Config, "config " + config_path + " describes '" + to_string(cfg.experiment) +
                                         "', not '" + experiment + "'");
    }
    if (seed) cfg.seed = *seed;
    if (dim) cfg.dim = *dim;
    if (f) cfg.f = *f;
    if (hbar) cfg.hbar = *hbar;
    if (out) cfg.output_path = *out;

    const RunManifest manifest = run(cfg);
    std::cout << "wrote";
    for (const auto& file : manifest.files) std::cout << ' ' << (cfg.output_path / file).string();
    std::cout << ' ' << (cfg.output_path / "manifest.txt").string() << '\n';
    for (const auto& [key, value] : manifest.derived) std::cout << key << " = " << format_double(value) << '\n';
    std::cout << "wall_seconds = " << manifest.wall_seconds << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "qchaos: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "qchaos: " << e.what() << '\n';
    return 3;
  }
}
