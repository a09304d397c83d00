#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "triphase/core_state.hpp"
#include "triphase/interface.hpp"
#include "triphase/spectral.hpp"

namespace triphase {

struct SolverConfig {
  double window_t = 0.02;
  int max_picard_iters = 60;
  double picard_tol = 1e-10;
  double contraction_target = 0.5;
  bool adapt_window = false;
  int store_every = 1;  // keep every k-th state in output trajectories

  void validate() const;
};

// One row per Picard iterate v_{m+1}.
struct PicardRow {
  int window = 0;
  int m = 0;              // iterate index of v_{m+1} - v_m
  double increment = 0;   // ‖v_{m+1} - v_m‖_{X_T}
  double ratio = 0;       // increment / previous increment (NaN for the first)
  double xt_norm = 0;     // ‖v_{m+1}‖_{X_T}
  double apriori = 0;     // 2‖v₀‖_H + 4‖L^{1/2} v₀‖_H
  double slack() const { return apriori - xt_norm; }
};

struct SolverReport {
  std::vector<PicardRow> rows;
  std::vector<std::string> warnings;
  std::optional<ConstantsReport> constants;
  double window_t = 0;
  int windows = 0;
  bool converged = true;
  double max_ratio = 0;

  std::string to_csv() const;
};

class NonconvergenceError : public std::runtime_error {
 public:
  NonconvergenceError(const std::string& what, SolverReport report, int window)
      : std::runtime_error(what), report_(std::move(report)), window_(window) {}
  const SolverReport& report() const { return report_; }
  int window() const { return window_; }

 private:
  SolverReport report_;
  int window_;
};

// Spectral counterpart of Trajectory: states and stored dv/dt per time node.
struct SpectralTrajectory {
  GridSpec grid;
  std::vector<double> times;
  std::vector<SpectralTri> states, derivs;
};

// Exponential-integrator weights for y' = -λy + f with f linear on a step:
// y1 = e y0 + w0 f0 + w1 (f1 - f0), w0 = dt φ1(λdt), w1 = dt φ2(λdt).
struct EtdWeights {
  double e, w0, w1;
};
EtdWeights etd_weights(double lam, double dt);

// Mild solution with piecewise-linear forcing sampled at forcing.size() nodes
// uniformly covering [0, T]. Stores dv/dt = -Lv + F at every node.
SpectralTrajectory duhamel_step(const SpectralTri& v0, const std::vector<SpectralTri>& forcing,
                                double T, const PhysParams& params);

// X_T norm on a spectral trajectory (sup over nodes + trapezoid L² parts).
double xt_norm(const SpectralTrajectory& traj, const PhysParams& params);

// How v₁ is chosen: the homogeneous solution e^{-tL}v₀, or v₀ held constant.
enum class PicardStart { Homogeneous, Frozen };

struct PicardOptions {
  PicardStart start = PicardStart::Homogeneous;
  const ConstantsReport* constants = nullptr;
  int window_index = 0;
};

// Fixed point on one window of length config.window_t (rounded down to a
// whole number of grid.dt steps). Returns v-variables.
struct WindowResult {
  SpectralTrajectory path;  // every node of the window
  SolverReport report;
};
WindowResult picard_window(const SpectralTri& v0, const SolverConfig& config,
                           const PhysParams& params, const PicardOptions& opt = {});

std::pair<Trajectory, SolverReport> picard_iterate(const TriField& v0, const SolverConfig& config,
                                                   const PhysParams& params,
                                                   const PicardOptions& opt = {});

// Lift, march windows restarting at each window end, lower. Output in
// θ-variables with the energy ledger filled at every step.
Trajectory solve_global(const TriField& theta0, double t_end, const SolverConfig& config,
                        const PhysParams& params, SolverReport* report = nullptr,
                        const ConstantsReport* constants = nullptr);

struct AdaptResult {
  SolverConfig config;
  bool rerun = false;
};
AdaptResult adapt_window(const SolverConfig& config, const ConstantsReport& constants,
                         double dt, const SolverReport* last = nullptr);

// ‖dv/dt + Lv - F(v)‖_H per stored node, F using the node's own derivative.
std::vector<double> deriv_residual(const SpectralTrajectory& traj, const PhysParams& params);

// Energy terms of the lowered state θ = v + v_S ψ, computed with exact
// integrals in the sine ⊕ ψ basis.
EnergySample lifted_energy_sample(const SpectralTri& v, double t, const PhysParams& params);

SpectralTrajectory to_spectral(const Trajectory& traj);
Trajectory from_spectral(const SpectralTrajectory& traj, int store_every = 1);

}  // namespace triphase
