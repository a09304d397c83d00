#pragma once

#include <functional>

#include "triphase/core_state.hpp"
#include "triphase/scenario.hpp"

namespace triphase::oracle {

enum class Scheme { Explicit, Implicit };

struct OracleOptions {
  Scheme scheme = Scheme::Explicit;
  double dt = 0;          // 0: explicit picks h_min²/(6 κ_max), implicit uses the grid dt
  double sample_dt = 0;   // spacing of stored states; 0 means the input grid's dt
  bool keep_states = true;
  bool hold_surface = false;  // θ_S frozen at its initial value (decoupled checks)
  int cg_max_iter = 2000;
  double cg_tol = 1e-13;  // relative residual of each implicit solve
  // Called at every sample time with the current state (θ-variables).
  std::function<void(double, const TriField&)> observer;
};

// Finite volumes on the refined grid: 5-point periodic Laplacian in x_h, 3-point
// in x3 with the interface value θ_S shared by both slabs and zero at the far
// walls. The interface row carries the surface mass plus the two adjacent
// half cells:
//   (α_S + h) θ_S' = κ_S Δ_h θ_S + (h/2)(κ_A + κ_B) Δ_h θ_S
//                    + κ_A (θ_A,1 - θ_S)/h + κ_B (θ_B,1 - θ_S)/h.
// Explicit runs reject a dt above the stability bound (ConfigError).
Trajectory oracle_solve(const TriField& theta0, double t_end, const PhysParams& params,
                        int multiplier = 2, const OracleOptions& opt = {});

// Initial data sampled directly on grid.refined(multiplier).
Trajectory oracle_solve(const InitialData& data, const GridSpec& grid, double t_end,
                        const PhysParams& params, int multiplier = 2,
                        const OracleOptions& opt = {});

// Discrete energy the scheme dissipates: Σ dx² (h Σ θ² + (α_S + h) θ_S²).
double oracle_energy(const TriField& theta, const PhysParams& params);

// Largest stable explicit step on a grid.
double explicit_dt_limit(const GridSpec& grid, const PhysParams& params);

}  // namespace triphase::oracle
