#pragma once

#include <vector>

#include "triphase/core_state.hpp"
#include "triphase/table.hpp"

namespace triphase {

// -(κ_A/2)‖∇θ_A‖² - (κ_B/2)‖∇θ_B‖² - (κ_S/2)‖∇_h θ_S‖², κ_S = κ̃_S α_S.
double e_td(const TriField& theta, const PhysParams& params);

struct GateauxReport {
  std::vector<double> eps, central, pairing, defect;
  double max_defect = 0;
  double boundary_term = 0;  // κ-weighted flux against (φ trace - φ_S)
  Table table;
};

// Central differences of e_td along φ versus ⟨Q_A,φ_A⟩ + ⟨Q_B,φ_B⟩ + ⟨Q_S,φ_S⟩.
// φ must satisfy the trace constraint (stored traces equal φ_S) within
// constraint_tol, otherwise DataError.
GateauxReport gateaux_check(const TriField& theta, const TriField& phi, const PhysParams& params,
                            const std::vector<double>& eps_list, double constraint_tol = 1e-10);

// Same pairing without the constraint. defect then equals boundary_term.
GateauxReport gateaux_unconstrained(const TriField& theta, const TriField& phi,
                                    const PhysParams& params,
                                    const std::vector<double>& eps_list);

struct HeatBalanceReport {
  double max_a = 0, max_b = 0, max_s = 0;
  Table table;
  double max() const;
};

// Weak residual of ∂_t θ = Q on the solver's trial space: bulk equations
// against every sine mode, the surface equation against the lift test
// triple (ψ, ψ, 1); surface residual divided by α_S. Needs stored derivatives.
HeatBalanceReport heat_balance_residual(const Trajectory& traj, const PhysParams& params);

// Fixed-region transport identity: ∫θ(t₂) - ∫θ(t₁) against the trapezoid
// integral of ∫∂_tθ, per consecutive pair, relative to max |∫θ|.
double transport_defect(const Trajectory& traj);

}  // namespace triphase
