#pragma once

#include <string>

#include "config.hpp"

namespace triphase::cli {

struct RunContext {
  std::string command;
  std::string config_path;
  std::string config_text;
  std::string out_dir;
  RunConfig cfg;
};

// Each returns the process exit status (0 ok, 1 a check failed).
int cmd_simulate(const RunContext& ctx);
int cmd_verify(const RunContext& ctx);
int cmd_constants(const RunContext& ctx);
int cmd_convergence(const RunContext& ctx);

}  // namespace triphase::cli
