#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "triphase/core_state.hpp"
#include "triphase/picard.hpp"

namespace triphase::cli {

// Malformed or incomplete configuration. line is 0 when no single line is at fault.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ScenarioSpec {
  std::string name = "default";
  std::string family = "gaussian-bump";  // gaussian-bump | pure-lift | single-mode | zero | file
  double amp = 1.0;
  double sigma_h = 1.0;
  double sigma_z = 1.0;
  double center_x = 0.0;
  double center_y = 0.0;
  int k_h = 1;
  int n = 1;
  std::string path;  // field file for family = file
  std::uint64_t seed = 20240601;
};

struct OutputSpec {
  std::string dir = "triphase_out";
  int constants_trials = 16;
  std::vector<int> oracle_multipliers = {2, 4};
  double convergence_t_end = 0.1;
};

struct RunConfig {
  PhysParams phys;
  GridSpec grid;
  SolverConfig solver;
  ScenarioSpec scenario;
  OutputSpec output;
};

// Flat INI-like text: [section] headers, `key = value` lines, `#` or `;`
// comments. Every [phys] key is required; unknown sections or keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical `key = value` echo of the parsed configuration.
std::string echo_config(const RunConfig& cfg);

}  // namespace triphase::cli
