#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "gaugelab/experiment.hpp"

namespace {

constexpr int kExitSuiteFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitInternalError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaugelab: property checks for modular function norms and F-normed spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Print one line per suite to stderr");

  auto* run = app.add_subcommand("run", "Run the suites of a JSON config");
  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<double> tol;
  std::optional<int> depth;
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "Report path (JSON)")->required();
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--trials", trials, "Trials per property")->check(CLI::PositiveNumber);
  run->add_option("--tol", tol, "Relative tolerance")->check(CLI::PositiveNumber);
  run->add_option("--depth", depth, "Depth of nested sequences")->check(CLI::Range(2, 60));

  auto* kinds = app.add_subcommand("list-kinds", "List Orlicz, gauge, suite and ball-family kinds");

  CLI11_PARSE(app, argc, argv);

  if (*kinds) {
    for (const gaugelab::KindInfo& k : gaugelab::list_kinds()) {
      std::cout << k.category << "\t" << k.name << "\t";
      for (std::size_t i = 0; i < k.params.size(); ++i) std::cout << (i ? "," : "") << k.params[i];
      std::cout << "\t" << k.summary << "\n";
    }
    return 0;
  }

  try {
    const gaugelab::ExperimentConfig cfg = gaugelab::load_config(config_path);
    gaugelab::Overrides o{seed, trials, tol, depth};
    const gaugelab::RunResult result = gaugelab::run_experiment(cfg, o, verbose ? &std::cerr : nullptr);
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitInternalError;
    }
    out << result.report.dump(2) << "\n";
    if (verbose) std::cerr << (result.passed ? "all suites passed" : "some suites failed") << "\n";
    return result.passed ? 0 : kExitSuiteFailure;
  } catch (const gaugelab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternalError;
  }
}
