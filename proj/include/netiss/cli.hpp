#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "netiss/certify.hpp"
#include "netiss/network.hpp"
#include "netiss/report.hpp"
#include "netiss/sim.hpp"
#include "netiss/io.hpp"
#include "netiss/wellposed.hpp"

namespace netiss {

/// Initial condition: uniform on [low, high] from the run seed, or a
/// constant vector.
struct InitialConfig {
  std::string kind = "uniform";
  double low = 0.0, high = 20.0;
  std::size_t dim = 1;
  Vec value = {0.0};
};

/// Constant input u_i(k) = value on every component.
struct InputConfig {
  double value = 0.0;
  std::size_t dim = 1;
};

struct SimulateConfig {
  long horizon = 10;
  std::vector<Index> observed = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  InitialConfig initial;
  InputConfig input;
};

struct CertifyConfig {
  GridPlan grid;  // grid.seed is overwritten by the run seed
  std::vector<double> inputs = {0.0, 0.5, 1.0};
  RepresentativeOptions representatives;
  double gain_radius = 100.0;
  int gain_grid = 1000;
};

struct WellposedConfig {
  SamplePlan plan;  // plan.seed is overwritten by the run seed
  std::optional<KBoundEstimate> estimate;
};

struct TruncateConfig {
  std::vector<Index> sizes = {100};
  long horizon = 50;
  InitialConfig initial;
  InputConfig input = {1.0, 1};
  /// Gain bounding the interface contribution in the decay check.
  ScalarGain omega_bar = ScalarGain::linear(1.0);
  bool check_decay = true;
};

struct TrafficDemoConfig {
  std::vector<Index> sizes = {100, 1000, 10000};
  long horizon = 500;
  long csv_time_stride = 10;
  Index csv_index_stride = 1;
  double initial_low = 0.0, initial_high = 20.0;
  double input = 1.0;
};

/// Fully resolved run. `network` is either {"builtin": name, "options": {...}}
/// or {"spec": <network json>}; paths are inlined while parsing so the echoed
/// config is self-contained.
struct RunConfig {
  std::string command;
  json network;
  std::optional<json> certificate;
  std::uint64_t seed = 1;
  Tolerance tolerance;
  Exec exec = Exec::Parallel;
  std::optional<std::filesystem::path> out;

  SimulateConfig simulate;
  CertifyConfig certify;
  WellposedConfig wellposed;
  TruncateConfig truncate;
  TrafficDemoConfig traffic_demo;
};

/// Command-line overrides applied on top of the config file.
struct FlagOverrides {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<Index>> sizes;
  std::optional<long> horizon;
  std::optional<double> tolerance;
  std::optional<std::string> builtin;
  std::optional<std::filesystem::path> network;
  std::optional<bool> serial;
};

std::vector<std::string> command_names();

/// Resolves `command` + config document + flags. Relative paths inside the
/// document are taken relative to `base_dir`. Throws ConfigError on schema
/// violations and std::invalid_argument on conflicting flags.
RunConfig parse_config(const std::string& command, const json& doc, const FlagOverrides& flags = {},
                       const std::filesystem::path& base_dir = ".");
/// Reads flags.config (if any) and calls the overload above.
RunConfig parse_config(const std::string& command, const FlagOverrides& flags);

/// Resolved config, without the output directory.
json to_json(const RunConfig& c);

struct RunResult {
  int exit_code = 0;  // 0 pass, 2 certificate failure
  json report;
};

/// Runs the command and writes config.json, report.json and the command's
/// CSV files into c.out (when set). Exceptions propagate to the caller.
RunResult run(const RunConfig& c, std::ostream& log);

}  // namespace netiss
