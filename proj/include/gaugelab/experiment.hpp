#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaugelab/gauge.hpp"
#include "gaugelab/l0_topology.hpp"
#include "gaugelab/musielak_orlicz.hpp"

namespace gaugelab {

inline constexpr int kConfigVersion = 1;

/// Validation failure; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedGauge {
  std::string kind;
  Gauge gauge;
  std::optional<MusielakOrliczFunction> musielak;  // set for integral-form kinds
};

struct SuiteSpec {
  std::string name;
  std::string kind;
  nlohmann::json args;  // validated suite fields
  std::vector<std::string> expect_failures;
};

struct RunParams {
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  double tol = 1e-9;
  int depth = 40;
};

struct ExperimentConfig {
  nlohmann::json source;
  FunctionSpace space;
  std::map<std::string, NamedGauge> gauges;
  std::vector<SuiteSpec> suites;
  RunParams params;
};

/// Throws ConfigError on schema violations (unknown keys included).
ExperimentConfig parse_config(const nlohmann::json& j);
/// Reads and parses a file; JSON syntax errors carry line and column.
ExperimentConfig load_config(const std::string& path);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<double> tol;
  std::optional<int> depth;
};

struct RunResult {
  nlohmann::json report;  // constants, suites, witnesses, meta
  bool passed = true;
};

/// Runs every suite; `log` (may be null) receives one line per suite.
RunResult run_experiment(const ExperimentConfig& cfg, const Overrides& overrides = {}, std::ostream* log = nullptr);

struct KindInfo {
  std::string category;  // orlicz, gauge, suite, family
  std::string name;
  std::vector<std::string> params;
  std::string summary;
};

std::vector<KindInfo> list_kinds();

nlohmann::json to_json(const AxiomReport& r);

}  // namespace gaugelab
