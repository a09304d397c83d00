#include "triphase/variational.hpp"

#include <algorithm>
#include <cmath>

#include "triphase/beta_lift.hpp"
#include "triphase/diagnostics.hpp"
#include "triphase/errors.hpp"
#include "triphase/spectral.hpp"

namespace triphase {

double e_td(const TriField& theta, const PhysParams& p) {
  const EnergySample e = energy_sample(theta, 0.0, p);
  return -0.5 * (e.diss_a + e.diss_b + e.diss_s);
}

namespace {

double surface_pair(const GridSpec& g, const std::vector<cplx>& f, const std::vector<cplx>& h) {
  const auto hm = hmodes(g);
  double acc = 0;
  for (std::size_t m = 0; m < hm.size(); ++m) acc += hm[m].w * (f[m] * std::conj(h[m])).real();
  return g.l_h * g.l_h * acc;
}

// ⟨κΔθ, φ⟩ over one slab, exact in the mixed basis.
double laplacian_pair(const GridSpec& g, const LiftProfile& lp, const MixedBulk& th,
                      const MixedBulk& ph, double kappa) {
  const auto hm = hmodes(g);
  const int nz = g.n_z;
  const double b2 = lp.beta * lp.beta;
  std::vector<cplx> lap(nz);
  double acc = 0;
  for (std::size_t m = 0; m < hm.size(); ++m) {
    const double q = hm[m].q;
    for (int n = 0; n < nz; ++n) lap[n] = -(q + lp.k[n] * lp.k[n]) * th.coeff[m * nz + n];
    const cplx amp = (b2 - q) * th.amp[m];
    acc += hm[m].w * mixed_inner_mode(lp, lap.data(), amp, &ph.coeff[m * nz], ph.amp[m]).real();
  }
  return kappa * g.l_h * g.l_h * acc;
}

struct Pairing {
  double total = 0, boundary = 0;
};

Pairing force_pairing(const TriField& theta, const TriField& phi, const PhysParams& p) {
  const GridSpec& g = theta.grid;
  const LiftProfile& lp = lift_profile(p.beta, g);
  const MixedTri th = to_mixed(theta, p), ph = to_mixed(phi, p);
  const auto hm = hmodes(g);
  // Q_S = κ_S Δ_h θ_S + κ_A ∂_z θ_A|₀ + κ_B ∂_z θ_B|₀ (z the distance from the interface).
  const std::vector<cplx> dza = mixed_dz0(g, th.a, p.beta), dzb = mixed_dz0(g, th.b, p.beta);
  std::vector<cplx> qs(hm.size());
  for (std::size_t m = 0; m < hm.size(); ++m)
    qs[m] = -p.kappa_s() * hm[m].q * th.s[m] + p.kappa_a * dza[m] + p.kappa_b * dzb[m];
  Pairing r;
  r.total = laplacian_pair(g, lp, th.a, ph.a, p.kappa_a) +
            laplacian_pair(g, lp, th.b, ph.b, p.kappa_b) + surface_pair(g, qs, ph.s);
  std::vector<cplx> ja(hm.size()), jb(hm.size());
  for (std::size_t m = 0; m < hm.size(); ++m) {
    ja[m] = ph.a.amp[m] - ph.s[m];
    jb[m] = ph.b.amp[m] - ph.s[m];
  }
  r.boundary = p.kappa_a * surface_pair(g, dza, ja) + p.kappa_b * surface_pair(g, dzb, jb);
  return r;
}

GateauxReport run_gateaux(const TriField& theta, const TriField& phi, const PhysParams& p,
                          const std::vector<double>& eps_list, bool constrained) {
  if (!same_shape(theta.grid, phi.grid)) throw ConfigError("gateaux_check: grid mismatch");
  if (eps_list.empty()) throw ConfigError("gateaux_check: eps_list is empty");
  const Pairing pr = force_pairing(theta, phi, p);
  GateauxReport r;
  r.boundary_term = pr.boundary;
  r.table.header = {"eps", "central_difference", "force_pairing", "defect"};
  // Traces travel with the fields so that θ ± εφ keeps its interface values.
  TriField th = theta, ph = phi;
  if (!th.has_traces()) th.trace_a = th.trace_b = th.f_s;
  if (!ph.has_traces()) ph.trace_a = ph.trace_b = ph.f_s;
  for (double e : eps_list) {
    const double cd = (e_td(axpy(e, ph, th), p) - e_td(axpy(-e, ph, th), p)) / (2 * e);
    const double pairing = constrained ? pr.total : pr.total + pr.boundary;
    const double d = std::abs(cd - pr.total);
    r.eps.push_back(e);
    r.central.push_back(cd);
    r.pairing.push_back(pairing);
    r.defect.push_back(constrained ? d : cd - pr.total);
    r.max_defect = std::max(r.max_defect, constrained ? d : std::abs(cd - pairing));
    r.table.add({e, cd, pr.total, r.defect.back()});
  }
  return r;
}

}  // namespace

GateauxReport gateaux_check(const TriField& theta, const TriField& phi, const PhysParams& p,
                            const std::vector<double>& eps_list, double constraint_tol) {
  phi.check();
  if (phi.has_traces()) {
    double gap = 0;
    for (std::size_t c = 0; c < phi.f_s.size(); ++c)
      gap = std::max({gap, std::abs(phi.trace_a[c] - phi.f_s[c]),
                      std::abs(phi.trace_b[c] - phi.f_s[c])});
    if (gap > constraint_tol)
      throw DataError("gateaux_check: variation violates the trace constraint by " +
                          std::to_string(gap),
                      gap);
  }
  return run_gateaux(theta, phi, p, eps_list, true);
}

GateauxReport gateaux_unconstrained(const TriField& theta, const TriField& phi,
                                    const PhysParams& p, const std::vector<double>& eps_list) {
  return run_gateaux(theta, phi, p, eps_list, false);
}

double HeatBalanceReport::max() const { return std::max({max_a, max_b, max_s}); }

HeatBalanceReport heat_balance_residual(const Trajectory& traj, const PhysParams& p) {
  if (!traj.has_derivs()) throw StateError("heat_balance_residual: no stored derivatives");
  HeatBalanceReport r;
  r.table.header = {"time", "residual_upper", "residual_lower", "residual_surface"};
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    const GridSpec& g = traj.states[j].grid;
    const LiftProfile& lp = lift_profile(p.beta, g);
    const auto hm = hmodes(g);
    const int nz = g.n_z;
    const double half = 0.5 * g.l_z, b2 = p.beta * p.beta;
    const MixedTri th = to_mixed(traj.states[j], p), dt = to_mixed(traj.derivs[j], p);
    double ra = 0, rb = 0, rs = 0;
    std::vector<cplx> zero(nz, 0.0);
    for (std::size_t m = 0; m < hm.size(); ++m) {
      const double q = hm[m].q, w = hm[m].w;
      auto side = [&](const MixedBulk& f, const MixedBulk& df, double kappa, double& acc) {
        for (int n = 0; n < nz; ++n) {
          const double k2 = lp.k[n] * lp.k[n];
          const cplx lhs = half * df.coeff[m * nz + n] + df.amp[m] * lp.ip[n];
          const cplx rhs =
              kappa * (-(q + k2) * half * f.coeff[m * nz + n] + (b2 - q) * f.amp[m] * lp.ip[n]);
          acc += w * std::norm(lhs - rhs) / half;
        }
        // Lift test function: ⟨∂_tθ, ψ⟩ + κ⟨∇θ, ∇ψ⟩.
        return mixed_inner_mode(lp, &df.coeff[m * nz], df.amp[m], zero.data(), 1.0) +
               kappa * mixed_grad_inner_mode(lp, q, &f.coeff[m * nz], f.amp[m], zero.data(), 1.0);
      };
      const cplx sa = side(th.a, dt.a, p.kappa_a, ra);
      const cplx sb = side(th.b, dt.b, p.kappa_b, rb);
      const cplx surf = sa + sb + p.alpha_s * dt.s[m] + p.kappa_s() * q * th.s[m];
      rs += w * std::norm(surf / p.alpha_s);
    }
    const double area = g.l_h * g.l_h;
    ra = std::sqrt(area * ra);
    rb = std::sqrt(area * rb);
    rs = std::sqrt(area * rs);
    r.max_a = std::max(r.max_a, ra);
    r.max_b = std::max(r.max_b, rb);
    r.max_s = std::max(r.max_s, rs);
    r.table.add({traj.times[j], ra, rb, rs});
  }
  return r;
}

double transport_defect(const Trajectory& traj) {
  if (!traj.has_derivs()) throw StateError("transport_defect: no stored derivatives");
  auto integral = [](const TriField& f) {
    const double dx2 = f.grid.dx() * f.grid.dx(), dz = f.grid.dz();
    double b = 0, s = 0;
    for (std::size_t k = 0; k < f.f_a.size(); ++k) b += f.f_a[k] + f.f_b[k];
    for (double v : f.f_s) s += v;
    return dx2 * (dz * b + s);
  };
  double worst = 0, scale = 0;
  for (std::size_t j = 0; j < traj.states.size(); ++j)
    scale = std::max(scale, std::abs(integral(traj.states[j])));
  for (std::size_t j = 1; j < traj.states.size(); ++j) {
    const double lhs = integral(traj.states[j]) - integral(traj.states[j - 1]);
    const double rhs = 0.5 * (traj.times[j] - traj.times[j - 1]) *
                       (integral(traj.derivs[j]) + integral(traj.derivs[j - 1]));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return scale > 0 ? worst / scale : worst;
}

}  // namespace triphase
