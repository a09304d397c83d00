#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "artifacts.hpp"
#include "checks.hpp"
#include "triphase/diagnostics.hpp"
#include "triphase/interface.hpp"
#include "triphase/picard.hpp"
#include "triphase/table.hpp"
#include "triphase/variational.hpp"

namespace triphase::cli {

namespace {

ArtifactSink open_sink(const RunContext& ctx) {
  return ArtifactSink(ctx.out_dir, sha256_hex(ctx.config_text));
}

ConstantsReport measure_constants(const RunConfig& cfg) {
  ConstantsOptions opt;
  opt.seed = cfg.scenario.seed;
  return estimate_constants(cfg.grid, cfg.phys, cfg.output.constants_trials, opt);
}

std::string constants_block(const ConstantsReport& c) { return "[constants]\n" + c.to_kv(); }

Table snapshot_table(const Trajectory& traj) {
  Table t;
  t.header = {"time", "h_norm", "l2_upper", "l2_lower", "l2_surface_weighted", "max_abs_surface"};
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    const TriField& s = traj.states[j];
    const double cell = s.grid.dx() * s.grid.dx();
    double a = 0, b = 0, f = 0, m = 0;
    for (double x : s.f_a) a += x * x;
    for (double x : s.f_b) b += x * x;
    for (double x : s.f_s) f += x * x, m = std::max(m, std::abs(x));
    const double dz = s.grid.dz();
    t.add({traj.times[j], h_norm(s), std::sqrt(a * cell * dz), std::sqrt(b * cell * dz),
           std::sqrt(s.weight_s * f * cell), m});
  }
  return t;
}

Table surface_table(const TriField& s) {
  Table t;
  t.header = {"x", "y", "theta_s"};
  const GridSpec& g = s.grid;
  for (int i = 0; i < g.n_h; ++i)
    for (int j = 0; j < g.n_h; ++j) t.add({g.x(i), g.x(j), s.f_s[s.surf_index(i, j)]});
  return t;
}

// Largest store stride that divides the step count and leaves at least `samples` intervals.
int sample_stride(int steps, int samples) {
  for (int s = std::max(1, steps / samples); s > 1; --s)
    if (steps % s == 0) return s;
  return 1;
}

int report_checks(const std::vector<Check>& checks) {
  int failed = 0;
  for (const Check& c : checks) {
    const bool skip = c.note.rfind("skipped", 0) == 0;
    std::printf("%-40s %s  measured=%s limit=%s%s%s\n", c.name.c_str(),
                skip ? "SKIP" : (c.pass ? "PASS" : "FAIL"), format_double(c.measured).c_str(),
                format_double(c.limit).c_str(), c.note.empty() ? "" : "  ", c.note.c_str());
    if (!c.pass) ++failed;
  }
  return failed;
}

}  // namespace

int cmd_simulate(const RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  ArtifactSink sink = open_sink(ctx);
  const TriField th0 = scenario_state(cfg);

  std::optional<ConstantsReport> constants;
  if (cfg.solver.adapt_window) constants = measure_constants(cfg);

  SolverReport rep;
  const Trajectory traj = solve_global(th0, cfg.grid.t_end, cfg.solver, cfg.phys, &rep,
                                       constants ? &*constants : nullptr);
  const EnergyLedger led = energy_ledger(traj, cfg.phys);
  const TraceGapReport gap = trace_gap(traj);
  const ContinuityReport cont = initial_continuity(traj, th0);
  const HeatBalanceReport hb = heat_balance_residual(traj, cfg.phys);

  sink.write("energy_ledger.csv", led.table().to_csv());
  sink.write("picard_report.csv", rep.to_csv());
  sink.write("trace_gap.csv", gap.table.to_csv());
  sink.write("heat_balance.csv", hb.table.to_csv());
  sink.write("initial_continuity.csv", cont.table.to_csv());
  sink.write("snapshots.csv", snapshot_table(traj).to_csv());
  sink.write("surface_final.csv", surface_table(traj.states.back()).to_csv());

  sink.note("scenario", cfg.scenario.name + " (" + cfg.scenario.family + ")");
  sink.note("windows", std::to_string(rep.windows));
  sink.note("window_t", format_double(rep.window_t));
  sink.note("picard_converged", rep.converged ? "true" : "false");
  sink.note("picard_max_ratio", format_double(rep.max_ratio));
  sink.note("energy_max_relative_defect", format_double(led.max_defect));
  sink.note("trace_gap_max", format_double(gap.max()));
  sink.note("heat_balance_max", format_double(hb.max()));
  sink.note("initial_continuity_exponent", format_double(cont.exponent));
  for (std::size_t k = 0; k < rep.warnings.size(); ++k)
    sink.note("warning_" + std::to_string(k), rep.warnings[k]);
  sink.finish(ctx.command, ctx.config_path, cfg, constants ? constants_block(*constants) : "");

  std::printf("simulate: %d windows, energy defect %s, trace gap %s, artifacts in %s\n",
              rep.windows, format_double(led.max_defect).c_str(), format_double(gap.max()).c_str(),
              ctx.out_dir.c_str());
  return 0;
}

int cmd_verify(const RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  ArtifactSink sink = open_sink(ctx);
  const ConstantsReport constants = measure_constants(cfg);

  std::vector<Check> all = operator_checks(cfg);
  for (auto&& part : {constants_checks(constants), solver_checks(cfg, constants),
                      variational_checks(cfg)})
    all.insert(all.end(), part.begin(), part.end());

  const int failed = report_checks(all);
  sink.write("verify.csv", checks_csv(all));
  sink.note("checks", std::to_string(all.size()));
  sink.note("failed", std::to_string(failed));
  sink.finish(ctx.command, ctx.config_path, cfg, constants_block(constants));
  std::printf("verify: %zu checks, %d failed\n", all.size(), failed);
  return failed == 0 ? 0 : 1;
}

int cmd_constants(const RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  ArtifactSink sink = open_sink(ctx);
  const ConstantsReport c = measure_constants(cfg);
  sink.write("constants.txt", c.to_kv());
  sink.finish(ctx.command, ctx.config_path, cfg, constants_block(c));
  std::fputs(c.to_kv().c_str(), stdout);
  return 0;
}

int cmd_convergence(const RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  ArtifactSink sink = open_sink(ctx);
  const double T = cfg.output.convergence_t_end;
  const TriField th0 = scenario_state(cfg);

  // Time-step study: dt, dt/2, dt/4 on the configured grid.
  Table dts;
  dts.header = {"dt", "energy_max_relative_defect", "final_h_diff_to_next", "observed_order"};
  std::vector<double> dt_list = {cfg.grid.dt, cfg.grid.dt / 2, cfg.grid.dt / 4};
  std::vector<TriField> finals;
  std::vector<double> defects;
  for (double dt : dt_list) {
    TriField start = th0;
    start.grid.dt = dt;
    const Trajectory tr = solve_global(start, T, cfg.solver, cfg.phys);
    defects.push_back(energy_ledger(tr, cfg.phys).max_defect);
    finals.push_back(tr.states.back());
  }
  std::vector<double> diffs;
  for (std::size_t k = 0; k + 1 < finals.size(); ++k) diffs.push_back(h_norm(finals[k] - finals[k + 1]));
  for (std::size_t k = 0; k < dt_list.size(); ++k) {
    const double d = k < diffs.size() ? diffs[k] : std::nan("");
    const double ord = (k + 1 < diffs.size() && diffs[k + 1] > 0) ? std::log2(diffs[k] / diffs[k + 1])
                                                                   : std::nan("");
    dts.add({dt_list[k], defects[k], d, ord});
  }
  sink.write("convergence_dt.csv", dts.to_csv());

  // Oracle study: needs analytic initial data for the refined grids.
  if (cfg.scenario.family != "file") {
    const InitialData data = scenario_data(cfg);
    GridSpec g = cfg.grid;
    g.t_end = T;
    g.validate();
    SolverConfig sc = cfg.solver;
    sc.store_every = sample_stride(g.steps(), 10);
    const Trajectory tr = solve_global(data.sample(g), T, sc, cfg.phys);
    Table orc;
    orc.header = {"multiplier", "oracle_h", "l2_difference", "observed_order"};
    double prev_h = 0, prev_l2 = 0;
    for (int m : cfg.output.oracle_multipliers) {
      const OracleComparison cmp = oracle_difference(tr, data, cfg.phys, m);
      const double ord = prev_h > 0 && cmp.l2 > 0 ? std::log(prev_l2 / cmp.l2) / std::log(prev_h / cmp.oracle_h)
                                                  : std::nan("");
      orc.add({static_cast<double>(m), cmp.oracle_h, cmp.l2, ord});
      prev_h = cmp.oracle_h;
      prev_l2 = cmp.l2;
    }
    sink.write("convergence_oracle.csv", orc.to_csv());
  } else {
    sink.note("oracle_study", "skipped: family 'file' has no analytic form for refined grids");
  }
  sink.finish(ctx.command, ctx.config_path, cfg);
  std::printf("convergence: artifacts in %s\n", ctx.out_dir.c_str());
  return 0;
}

}  // namespace triphase::cli
