#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "triphase/interface.hpp"

namespace triphase::cli {

struct Check {
  std::string name;
  double measured = 0;
  double limit = 0;
  bool pass = false;
  std::string note;  // extra context; "skipped: ..." when preconditions fail
};

// Operator-level invariants that need no time stepping.
std::vector<Check> operator_checks(const RunConfig& cfg);

// Checks on a solve of the configured scenario plus a Picard window from the
// same data. `constants` decides whether the contraction gate applies.
std::vector<Check> solver_checks(const RunConfig& cfg, const ConstantsReport& constants);

// Gateaux pairing of the dissipation functional on the configured grid.
std::vector<Check> variational_checks(const RunConfig& cfg);

std::vector<Check> constants_checks(const ConstantsReport& constants);

std::string checks_csv(const std::vector<Check>& checks);

}  // namespace triphase::cli
