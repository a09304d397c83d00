#pragma once

#include <vector>

#include "triphase/core_state.hpp"
#include "triphase/fd_oracle.hpp"
#include "triphase/scenario.hpp"
#include "triphase/table.hpp"

namespace triphase {

// Energy terms of a θ state from its stored traces, exact in the sine ⊕ ψ basis.
EnergySample energy_sample(const TriField& theta, double t, const PhysParams& params);

struct EnergyLedger {
  std::vector<EnergySample> samples;
  std::vector<double> total;  // E(t) + 2∫₀ᵗ D, trapezoid in time
  double max_defect = 0;      // max over t₁ < t₂ of |total(t₂) - total(t₁)| / E(t₁)
  double max_increase = 0;    // max over t₁ < t₂ of E(t₂) - E(t₁), clipped at 0

  Table table() const;
};

// Uses traj.energy_ledger when the solver filled it, otherwise the stored states.
EnergyLedger energy_ledger(const Trajectory& traj, const PhysParams& params);
EnergyLedger energy_ledger(std::vector<EnergySample> samples);

struct ContinuityReport {
  std::vector<double> t, diff;  // ‖θ(t) - θ₀‖_H
  double exponent = 0, constant = 0;  // least-squares fit diff ≈ C t^p
  Table table;
};

// At the stored times listed in `at` (or the first `count` positive stored
// times when `at` is empty).
ContinuityReport initial_continuity(const Trajectory& traj, const TriField& theta0,
                                    std::size_t count = 3, const std::vector<double>& at = {});

struct TraceGapReport {
  double max_gap_a = 0, max_gap_b = 0;  // surface L² norms of γ±[θ] - θ_S
  Table table;
  double max() const { return max_gap_a > max_gap_b ? max_gap_a : max_gap_b; }
};

// use_stored: take interface values from trace_a/b when present (solver
// output); otherwise extrapolate from the first three nodes (oracle output,
// or deliberately checking the sampled profile).
TraceGapReport trace_gap(const Trajectory& traj, bool use_stored = true);

struct HolderReport {
  double max_ratio = 0;
  Table table;  // separation, pair count, max ratio
};

// ‖L v(t₂) - L v(t₁)‖_H / (t₂ - t₁)^q over stored pairs in [t_lo, t_hi] at
// dyadic separations, v the lifted state.
HolderReport holder_probe(const Trajectory& traj, const PhysParams& params, double q,
                          double t_lo, double t_hi);

// θ on a refined grid with the same box: horizontal modes zero-padded, the
// sine series evaluated on the fine nodes, and the lift profile resampled.
TriField resample_theta(const TriField& theta, const GridSpec& fine, const PhysParams& params);

struct OracleComparison {
  std::vector<double> times, diff;  // ‖θ_spectral - θ_oracle‖_H on the oracle grid
  double l2 = 0;                    // (∫ diff² dt)^{1/2}, trapezoid over the samples
  double oracle_h = 0;              // vertical spacing of the oracle grid
};

// Runs the oracle from `data` on grid.refined(multiplier) and compares at the
// stored times of `spectral` (uniformly spaced θ states covering [0, t_end]).
// States are streamed through the oracle observer, never stored.
OracleComparison oracle_difference(const Trajectory& spectral, const InitialData& data,
                                   const PhysParams& params, int multiplier,
                                   oracle::OracleOptions opt = {});

}  // namespace triphase
