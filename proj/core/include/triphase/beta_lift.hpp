#pragma once

#include <vector>

#include "triphase/core_state.hpp"
#include "triphase/spectral.hpp"

namespace triphase {

// The lift profile ψ(z) = e^{-βz} on one slab together with its exact
// projections onto the sine basis. Everything is analytic in (β, l_z, k_n);
// nothing here is a sampled transform.
struct LiftProfile {
  double beta = 0;
  double l_z = 0;
  int n_z = 0;
  std::vector<double> k;      // k_n
  std::vector<double> nodal;  // ψ(z_n)
  std::vector<double> ip;     // ∫ ψ sin(k_n z) dz
  std::vector<double> P;      // ip / (l_z/2): sine coefficients of the L2 projection
  std::vector<double> g;      // (k_n² + β²) ip = k_n (1 - (-1)^n e^{-βl_z})
  double m = 0;               // ‖ψ‖²
  double p = 0;               // ‖Πψ‖² = Σ ip P
  double eps = 0;             // m - p, the part of ψ the sine basis misses
};

// Cached per (β, l_z, n_z); the reference stays valid for the process lifetime.
const LiftProfile& lift_profile(double beta, const GridSpec& g);

// u_A = θ_A - θ_S e^{-βx3}, u_B = θ_B - θ_S e^{βx3}, u_S = θ_S.
// Interface traces are taken from θ.trace_a/b when present, otherwise by
// one-sided extrapolation; a gap above tol raises DataError.
TriField lift_to_u(const TriField& theta, const PhysParams& p, double tol = 1e-8);

// Inverse of lift_to_u. Fills trace_a/b from the sine-series trace of u
// plus the lifted surface value.
TriField lower_to_theta(const TriField& u, const PhysParams& p);

// Explicit projection for experiment setup: shifts each bulk field by
// (θ_S - γ[θ]) e^{∓βx3} so the traces match θ_S.
TriField project_compatible(const TriField& theta, const PhysParams& p);

// ‖e^{∓βx3} f_S‖ on the slab: midpoint rule in x_h, exact integral in x3.
double weighted_surface_norm(const std::vector<double>& f_s, const GridSpec& g,
                             const PhysParams& p, Side side);

// θ-type bulk field written as Σ c_n sin(k_n z) + amp·ψ(z) per horizontal
// mode, which admits exact L2 and Dirichlet integrals.
struct MixedBulk {
  std::vector<cplx> coeff;  // (m*n_z + n)
  std::vector<cplx> amp;    // per horizontal mode
};

struct MixedTri {
  GridSpec grid;
  double beta = 0;
  MixedBulk a, b;
  std::vector<cplx> s;
};

// Traces from θ.trace_a/b when present, else θ_S (compatible data).
MixedTri to_mixed(const TriField& theta, const PhysParams& p);
MixedBulk mixed_bulk(const GridSpec& g, const std::vector<double>& f,
                     const std::vector<double>& trace, double beta);

// Per horizontal mode integrals over one slab. Pass the mode's |ξ|².
// Returns ∫ f conj(h) dz and ∫ (q f conj(h) + f' conj(h')) dz.
cplx mixed_inner_mode(const LiftProfile& lp, const cplx* fa, cplx famp, const cplx* ha,
                      cplx hamp);
cplx mixed_grad_inner_mode(const LiftProfile& lp, double q, const cplx* fa, cplx famp,
                           const cplx* ha, cplx hamp);

// Whole-slab sums over horizontal modes (weighted, times l_h²).
double mixed_inner(const GridSpec& g, const LiftProfile& lp, const MixedBulk& f,
                   const MixedBulk& h);
double mixed_grad_inner(const GridSpec& g, const LiftProfile& lp, const MixedBulk& f,
                        const MixedBulk& h);

// Normal derivative ∂_z at z = 0 per horizontal mode: Σ k_n c_n - β amp.
std::vector<cplx> mixed_dz0(const GridSpec& g, const MixedBulk& f, double beta);

}  // namespace triphase
