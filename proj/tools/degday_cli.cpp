#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "degday/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Degree-day futures and options under a continuous autoregressive "
      "temperature model: prices, local sensitivities, figure tables"};

  degday::RunRequest req;
  std::optional<std::uint64_t> seed;
  std::optional<int> paths;

  app.add_option("--scenario", req.scenario_path, "Scenario file (JSON, // comments allowed)")
      ->required();
  app.add_option("--command", req.command,
                 "validate | price | greeks | option | fig3..fig13")
      ->required();
  app.add_option("--out", req.out_dir, "Output directory (overrides the scenario's)");
  app.add_option("--seed", seed, "Monte Carlo seed (overrides the scenario's)");
  app.add_option("--paths", paths, "Monte Carlo path count (overrides the scenario's)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  req.seed = seed;
  req.paths = paths;
  return degday::run(req, std::cout, std::cerr);
}
