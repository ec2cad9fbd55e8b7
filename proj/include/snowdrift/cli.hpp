#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "snowdrift/io.hpp"

namespace snowdrift {

/// Everything a command needs. Defaults, then the --config file, then flags.
struct ScenarioConfig {
  std::string payoffs;  // "T,R,S,P"
  int m = 0;
  std::uint64_t seed = 1;
  std::string out;      // output directory; empty writes the main document to stdout
  IntegratorConfig integrator;

  std::string x0 = "1/4,1/4,1/4,1/4";
  long stride = 100;

  int samples = 1000;

  std::string seed_a;
  std::string seed_b;
  int pairs = 20;
  int iters = 60;

  std::string r_min;
  std::string r_max;
  std::string r_step = "1/20";
  bool simulate = false;
  int runs_per_point = 20;
};

Json to_json(const ScenarioConfig& cfg);

/// Overwrites the fields present in a JSON config document.
void apply_config(ScenarioConfig& cfg, const Json& doc);

enum ExitCode { kOk = 0, kValidation = 2, kUnresolved = 3, kInternal = 4 };

/// Commands: classify, simulate, equilibria, basins, separatrix, sweep.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace snowdrift
