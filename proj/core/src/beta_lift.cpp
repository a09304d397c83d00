#include "triphase/beta_lift.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "triphase/errors.hpp"

namespace triphase {

namespace {
std::mutex g_lift_mutex;
std::map<std::tuple<double, double, int>, std::unique_ptr<LiftProfile>> g_lift_cache;

// Quadratic extrapolation to z = 0 from nodes h, 2h, 3h.
double extrap0(const double* col) { return 3.0 * col[0] - 3.0 * col[1] + col[2]; }

std::vector<double> extrap_trace(const GridSpec& g, const std::vector<double>& f) {
  std::vector<double> tr(g.surf_size());
  for (std::size_t c = 0; c < tr.size(); ++c) {
    const double* col = f.data() + c * g.n_z;
    tr[c] = g.n_z >= 3 ? extrap0(col) : col[0];
  }
  return tr;
}
}  // namespace

const LiftProfile& lift_profile(double beta, const GridSpec& g) {
  std::lock_guard<std::mutex> lock(g_lift_mutex);
  auto key = std::make_tuple(beta, g.l_z, g.n_z);
  auto it = g_lift_cache.find(key);
  if (it != g_lift_cache.end()) return *it->second;

  auto lp = std::make_unique<LiftProfile>();
  lp->beta = beta;
  lp->l_z = g.l_z;
  lp->n_z = g.n_z;
  const double ebl = std::exp(-beta * g.l_z);
  lp->m = -std::expm1(-2.0 * beta * g.l_z) / (2.0 * beta);
  for (int n = 0; n < g.n_z; ++n) {
    double k = g.kz(n);
    double sign = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^{n+1} for mode index n+1
    double gn = k * (1.0 - sign * ebl);
    double ip = gn / (k * k + beta * beta);
    lp->k.push_back(k);
    lp->nodal.push_back(std::exp(-beta * g.z(n)));
    lp->ip.push_back(ip);
    lp->P.push_back(ip / (0.5 * g.l_z));
    lp->g.push_back(gn);
    lp->p += ip * ip / (0.5 * g.l_z);
  }
  lp->eps = lp->m - lp->p;
  return *g_lift_cache.emplace(key, std::move(lp)).first->second;
}

TriField lift_to_u(const TriField& theta, const PhysParams& p, double tol) {
  theta.check();
  const GridSpec& g = theta.grid;
  const LiftProfile& lp = lift_profile(p.beta, g);
  std::vector<double> ta = theta.has_traces() ? theta.trace_a : extrap_trace(g, theta.f_a);
  std::vector<double> tb = theta.has_traces() ? theta.trace_b : extrap_trace(g, theta.f_b);
  double gap = 0;
  for (std::size_t c = 0; c < g.surf_size(); ++c)
    gap = std::max({gap, std::abs(ta[c] - theta.f_s[c]), std::abs(tb[c] - theta.f_s[c])});
  if (gap > tol)
    throw DataError("lift_to_u: interface traces differ from theta_S by " + std::to_string(gap),
                    gap);

  TriField u = theta;
  for (std::size_t c = 0; c < g.surf_size(); ++c) {
    const double s = theta.f_s[c];
    for (int n = 0; n < g.n_z; ++n) {
      u.f_a[c * g.n_z + n] -= s * lp.nodal[n];
      u.f_b[c * g.n_z + n] -= s * lp.nodal[n];
    }
  }
  u.trace_a.resize(g.surf_size());
  u.trace_b.resize(g.surf_size());
  for (std::size_t c = 0; c < g.surf_size(); ++c) {
    u.trace_a[c] = ta[c] - theta.f_s[c];
    u.trace_b[c] = tb[c] - theta.f_s[c];
  }
  return u;
}

TriField lower_to_theta(const TriField& u, const PhysParams& p) {
  u.check();
  const GridSpec& g = u.grid;
  const LiftProfile& lp = lift_profile(p.beta, g);
  TriField th = u;
  th.trace_a.assign(g.surf_size(), 0.0);
  th.trace_b.assign(g.surf_size(), 0.0);
  for (std::size_t c = 0; c < g.surf_size(); ++c) {
    const double s = u.f_s[c];
    for (int n = 0; n < g.n_z; ++n) {
      th.f_a[c * g.n_z + n] += s * lp.nodal[n];
      th.f_b[c * g.n_z + n] += s * lp.nodal[n];
    }
    // Sine-series trace of u is zero; recorded traces of u (if any) survive.
    th.trace_a[c] = (u.has_traces() ? u.trace_a[c] : 0.0) + s;
    th.trace_b[c] = (u.has_traces() ? u.trace_b[c] : 0.0) + s;
  }
  return th;
}

TriField project_compatible(const TriField& theta, const PhysParams& p) {
  theta.check();
  const GridSpec& g = theta.grid;
  const LiftProfile& lp = lift_profile(p.beta, g);
  std::vector<double> ta = theta.has_traces() ? theta.trace_a : extrap_trace(g, theta.f_a);
  std::vector<double> tb = theta.has_traces() ? theta.trace_b : extrap_trace(g, theta.f_b);
  TriField r = theta;
  for (std::size_t c = 0; c < g.surf_size(); ++c) {
    const double da = theta.f_s[c] - ta[c], db = theta.f_s[c] - tb[c];
    for (int n = 0; n < g.n_z; ++n) {
      r.f_a[c * g.n_z + n] += da * lp.nodal[n];
      r.f_b[c * g.n_z + n] += db * lp.nodal[n];
    }
  }
  r.trace_a = theta.f_s;
  r.trace_b = theta.f_s;
  return r;
}

double weighted_surface_norm(const std::vector<double>& f_s, const GridSpec& g,
                             const PhysParams& p, Side) {
  if (f_s.size() != g.surf_size()) throw ConfigError("weighted_surface_norm: shape mismatch");
  if (!(p.beta > 0)) throw DomainError("weighted_surface_norm: beta must be > 0");
  // The mirrored lower slab makes both signs identical.
  double s2 = 0;
  for (double v : f_s) s2 += v * v;
  s2 *= g.dx() * g.dx();
  const double m = -std::expm1(-2.0 * p.beta * g.l_z) / (2.0 * p.beta);
  return std::sqrt(s2 * m);
}

MixedBulk mixed_bulk(const GridSpec& g, const std::vector<double>& f,
                     const std::vector<double>& trace, double beta) {
  const LiftProfile& lp = lift_profile(beta, g);
  std::vector<double> rest = f;
  for (std::size_t c = 0; c < g.surf_size(); ++c)
    for (int n = 0; n < g.n_z; ++n) rest[c * g.n_z + n] -= trace[c] * lp.nodal[n];
  MixedBulk mb;
  mb.coeff = bulk_forward(g, rest);
  mb.amp = surface_forward(g, trace);
  return mb;
}

MixedTri to_mixed(const TriField& theta, const PhysParams& p) {
  theta.check();
  MixedTri mt;
  mt.grid = theta.grid;
  mt.beta = p.beta;
  mt.a = mixed_bulk(theta.grid, theta.f_a, theta.has_traces() ? theta.trace_a : theta.f_s, p.beta);
  mt.b = mixed_bulk(theta.grid, theta.f_b, theta.has_traces() ? theta.trace_b : theta.f_s, p.beta);
  mt.s = surface_forward(theta.grid, theta.f_s);
  return mt;
}

cplx mixed_inner_mode(const LiftProfile& lp, const cplx* fa, cplx famp, const cplx* ha,
                      cplx hamp) {
  cplx sines = 0, f_psi = 0, h_psi = 0;
  for (int n = 0; n < lp.n_z; ++n) {
    sines += fa[n] * std::conj(ha[n]);
    f_psi += fa[n] * lp.ip[n];
    h_psi += std::conj(ha[n]) * lp.ip[n];
  }
  return 0.5 * lp.l_z * sines + f_psi * std::conj(hamp) + famp * h_psi +
         famp * std::conj(hamp) * lp.m;
}

cplx mixed_grad_inner_mode(const LiftProfile& lp, double q, const cplx* fa, cplx famp,
                           const cplx* ha, cplx hamp) {
  // ∫ψ'φ_n' = -β² ∫ψφ_n and ∫ψ'ψ' = β² m, both exact for ψ = e^{-βz}.
  const double b2 = lp.beta * lp.beta;
  cplx sines = 0, f_psi = 0, h_psi = 0;
  for (int n = 0; n < lp.n_z; ++n) {
    sines += lp.k[n] * lp.k[n] * fa[n] * std::conj(ha[n]);
    f_psi += fa[n] * lp.ip[n];
    h_psi += std::conj(ha[n]) * lp.ip[n];
  }
  cplx dz = 0.5 * lp.l_z * sines - b2 * (f_psi * std::conj(hamp) + famp * h_psi) +
            b2 * lp.m * famp * std::conj(hamp);
  return q * mixed_inner_mode(lp, fa, famp, ha, hamp) + dz;
}

namespace {
template <class Fn>
double mode_sum(const GridSpec& g, Fn fn) {
  auto hm = hmodes(g);
  double acc = 0;
  for (std::size_t m = 0; m < hm.size(); ++m) acc += hm[m].w * fn(m, hm[m].q).real();
  return g.l_h * g.l_h * acc;
}
}  // namespace

double mixed_inner(const GridSpec& g, const LiftProfile& lp, const MixedBulk& f,
                   const MixedBulk& h) {
  return mode_sum(g, [&](std::size_t m, double) {
    return mixed_inner_mode(lp, &f.coeff[m * g.n_z], f.amp[m], &h.coeff[m * g.n_z], h.amp[m]);
  });
}

double mixed_grad_inner(const GridSpec& g, const LiftProfile& lp, const MixedBulk& f,
                        const MixedBulk& h) {
  return mode_sum(g, [&](std::size_t m, double q) {
    return mixed_grad_inner_mode(lp, q, &f.coeff[m * g.n_z], f.amp[m], &h.coeff[m * g.n_z],
                                 h.amp[m]);
  });
}

std::vector<cplx> mixed_dz0(const GridSpec& g, const MixedBulk& f, double beta) {
  const LiftProfile& lp = lift_profile(beta, g);
  std::vector<cplx> out(g.hmodes());
  for (std::size_t m = 0; m < out.size(); ++m) {
    cplx acc = 0;
    for (int n = 0; n < g.n_z; ++n) acc += lp.k[n] * f.coeff[m * g.n_z + n];
    out[m] = acc - beta * f.amp[m];
  }
  return out;
}

}  // namespace triphase
