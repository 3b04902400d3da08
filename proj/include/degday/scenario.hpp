#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "degday/car_model.hpp"
#include "degday/seasonal.hpp"
#include "degday/types.hpp"

namespace degday {

// One futures contract: a single measurement day (is_period = false, `start`
// holds s) or a measurement period [start, end).
struct ContractSpec {
  Side side = Side::Cdd;
  bool is_period = false;
  double start = 0.0;
  double end = 0.0;
  Scheme scheme = Scheme::Exact;
  std::string label;
};

// A call on a futures contract, exercised at day offset `tau`.
struct OptionContractSpec {
  double strike = 0.0;
  double tau = 0.0;
  double rate = 0.0;
  ContractSpec underlying;
  std::string label;
};

// Inclusive integer range of day offsets s - t (or tau1 - t) used by the
// figure commands.
struct GridRange {
  int lo = 0;
  int hi = 0;
};

// Fully validated scenario: model and seasonal curve constructed, every date
// resolved to a day offset from the scenario epoch.
struct Scenario {
  Scenario(CarModel m, SeasonalFunction s) : model(std::move(m)), seasonal(std::move(s)) {}

  std::chrono::sys_days epoch{};
  CarModel model;
  SeasonalFunction seasonal;
  double t = 0.0;
  StateVector state;
  std::vector<ContractSpec> contracts;
  std::vector<OptionContractSpec> options;
  GridRange day_maturities{1, 50};
  GridRange option_maturities{2, 50};
  GridRange period_maturities{1, 50};
  GridRange price_window{2, 152};
  std::optional<int> mc_paths;
  std::optional<std::uint64_t> mc_seed;
  std::string out_dir = ".";
};

// Collects every violation found in the scenario file, each prefixed with the
// offending field path ("contracts[1].period: ..."). Includes model
// construction failures (non-stationary drift matrix, malformed companion
// structure). Empty on success. Throws ConfigError only when the file cannot
// be read or parsed at all.
std::vector<std::string> validate_file(const std::string& path);

// Loads and fully validates a scenario. Throws ConfigError with the joined
// diagnostics on validation failure; model construction errors
// (StationarityError) propagate unchanged.
Scenario load_scenario(const std::string& path);

// One CLI invocation. Optional fields override the scenario's mc/output
// settings.
struct RunRequest {
  std::string command;
  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> paths;
};

// Executes a command against a scenario file and writes CSV artifacts.
// Commands: validate, price, greeks, option, fig3..fig13 (a "figure " or
// "figure:" prefix is accepted). Returns the process exit code: 0 on
// success, 2 on configuration errors, 3 on numerical errors.
int run(const RunRequest& req, std::ostream& out, std::ostream& err);

}  // namespace degday
