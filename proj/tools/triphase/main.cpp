// triphase <simulate|verify|constants|convergence> --config PATH [--out DIR]
//
// Exit status: 0 success, 1 a verification check failed, 2 bad command line
// or configuration, 3 the run itself failed.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "triphase/errors.hpp"
#include "triphase/parallel.hpp"
#include "triphase/picard.hpp"
#include "version.hpp"

namespace {

int thread_cap_from_env() {
  const char* s = std::getenv("TRIPHASE_THREADS");
  if (!s || !*s) return 0;
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (*end != '\0' || v < 0) throw triphase::cli::ParseError(0, "TRIPHASE_THREADS must be a nonnegative integer");
  return static_cast<int>(v);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace triphase::cli;
  CLI::App app{"Spectral simulator and verification harness for the three-phase heat problem"};
  app.set_version_flag("--version", kVersion);
  std::string command, config_path, out_dir;
  app.add_option("command", command, "simulate | verify | constants | convergence")
      ->required()
      ->check(CLI::IsMember({"simulate", "verify", "constants", "convergence"}));
  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  RunContext ctx;
  ctx.command = command;
  ctx.config_path = config_path;
  try {
    std::ifstream f(config_path, std::ios::binary);
    if (!f) throw ParseError(0, "cannot open config file '" + config_path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    ctx.config_text = ss.str();
    ctx.cfg = parse_config(ctx.config_text);
    triphase::set_thread_cap(thread_cap_from_env());
  } catch (const ParseError& e) {
    std::fprintf(stderr, "triphase: %s: %s\n", config_path.c_str(), e.what());
    return 2;
  }
  ctx.out_dir = out_dir.empty() ? ctx.cfg.output.dir : out_dir;

  try {
    if (command == "simulate") return cmd_simulate(ctx);
    if (command == "verify") return cmd_verify(ctx);
    if (command == "constants") return cmd_constants(ctx);
    return cmd_convergence(ctx);
  } catch (const triphase::NonconvergenceError& e) {
    std::fprintf(stderr, "triphase %s: scenario '%s': window %d: %s\n", command.c_str(),
                 ctx.cfg.scenario.name.c_str(), e.window(), e.what());
  } catch (const triphase::DataError& e) {
    std::fprintf(stderr, "triphase %s: scenario '%s': %s (measured %g)\n", command.c_str(),
                 ctx.cfg.scenario.name.c_str(), e.what(), e.measured());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "triphase %s: scenario '%s': %s\n", command.c_str(),
                 ctx.cfg.scenario.name.c_str(), e.what());
  }
  return 3;
}
