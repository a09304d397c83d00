#include "triphase/interface.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "triphase/beta_lift.hpp"
#include "triphase/errors.hpp"
#include "triphase/parallel.hpp"
#include "triphase/picard.hpp"

namespace triphase {

namespace {

std::vector<double> sine_series_trace(const GridSpec& g, const std::vector<double>& f) {
  std::vector<cplx> c = bulk_forward(g, f);
  std::vector<cplx> tr(g.hmodes());
  for (std::size_t m = 0; m < tr.size(); ++m) {
    cplx acc = 0;
    for (int n = 0; n < g.n_z; ++n) acc += c[m * g.n_z + n] * std::sin(g.kz(n) * 0.0);
    tr[m] = acc;
  }
  return surface_inverse(g, tr);
}

std::vector<double> extrapolated_trace(const GridSpec& g, const std::vector<double>& f) {
  if (g.n_z < 3) throw ConfigError("trace extrapolation needs n_z >= 3");
  std::vector<double> tr(g.surf_size());
  for (std::size_t c = 0; c < tr.size(); ++c) {
    const double* col = f.data() + c * g.n_z;
    tr[c] = 3.0 * col[0] - 3.0 * col[1] + col[2];
  }
  return tr;
}

std::vector<double> dz_trace(const GridSpec& g, const std::vector<double>& f) {
  if (f.size() != g.bulk_size()) throw ConfigError("trace_normal_deriv: shape mismatch");
  std::vector<cplx> c = bulk_forward(g, f);
  std::vector<cplx> tr(g.hmodes());
  for (std::size_t m = 0; m < tr.size(); ++m) {
    cplx acc = 0;
    for (int n = 0; n < g.n_z; ++n) acc += g.kz(n) * c[m * g.n_z + n];
    tr[m] = acc;
  }
  return surface_inverse(g, tr);
}

}  // namespace

std::vector<double> trace_plus(const GridSpec& g, const std::vector<double>& f_a,
                               TraceMethod method) {
  if (f_a.size() != g.bulk_size()) throw ConfigError("trace_plus: shape mismatch");
  return method == TraceMethod::Sine ? sine_series_trace(g, f_a) : extrapolated_trace(g, f_a);
}

std::vector<double> trace_minus(const GridSpec& g, const std::vector<double>& f_b,
                                TraceMethod method) {
  if (f_b.size() != g.bulk_size()) throw ConfigError("trace_minus: shape mismatch");
  return method == TraceMethod::Sine ? sine_series_trace(g, f_b) : extrapolated_trace(g, f_b);
}

std::vector<double> trace_normal_deriv_plus(const GridSpec& g, const std::vector<double>& f_a) {
  return dz_trace(g, f_a);
}

std::vector<double> trace_normal_deriv_minus(const GridSpec& g, const std::vector<double>& f_b) {
  std::vector<double> d = dz_trace(g, f_b);
  for (double& v : d) v = -v;
  return d;
}

SpectralTri assemble_f(const SpectralTri& v, const SpectralTri& dv, const PhysParams& p) {
  if (!same_shape(v.grid, dv.grid)) throw ConfigError("assemble_f: state/derivative grids differ");
  const GridSpec& g = v.grid;
  const LiftProfile& lp = lift_profile(p.beta, g);
  const auto hm = hmodes(g);
  const double b2 = p.beta * p.beta;
  const int nz = g.n_z;
  SpectralTri f = SpectralTri::zeros(g);
  f.weight_s = v.weight_s;
  for (std::size_t m = 0; m < hm.size(); ++m) {
    const double q = hm[m].q;
    const cplx s = v.c_s[m], ds = dv.c_s[m];
    const cplx ca = -ds + p.kappa_a * (b2 - q) * s;
    const cplx cb = -ds + p.kappa_b * (b2 - q) * s;
    cplx ga = 0, gb = 0;
    for (int n = 0; n < nz; ++n) {
      f.c_a[m * nz + n] = ca * lp.P[n];
      f.c_b[m * nz + n] = cb * lp.P[n];
      ga += lp.g[n] * v.c_a[m * nz + n];
      gb += lp.g[n] * v.c_b[m * nz + n];
    }
    f.c_s[m] = (p.kappa_a * ga + p.kappa_b * gb -
                (p.kappa_a + p.kappa_b) * (b2 * (lp.p + lp.m) + q * lp.eps) * s -
                2.0 * lp.eps * ds) /
               p.alpha_s;
  }
  return f;
}

TriField assemble_f(const Trajectory& traj, std::size_t j, const PhysParams& p) {
  if (!traj.has_derivs()) throw StateError("assemble_f: trajectory carries no stored derivative");
  if (j >= traj.states.size()) throw StateError("assemble_f: time index out of range");
  return from_spectral(assemble_f(to_spectral(traj.states[j]), to_spectral(traj.derivs[j]), p));
}

std::string ConstantsReport::to_kv() const {
  std::ostringstream os;
  auto put = [&os](const char* k, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << k << " = " << buf << "\n";
  };
  put("c_star", c_star);
  put("k_a", k_a);
  put("k_b", k_b);
  put("k_s", k_s);
  put("alpha_0", alpha_0);
  put("beta_0", beta_0);
  put("c_star_big", c_star_big);
  put("t_star", t_star);
  put("probe_horizon", probe_horizon);
  os << "trials = " << trials << "\n";
  os << "seed = " << seed << "\n";
  os << "argmax_c_star = " << argmax_c_star << "\n";
  os << "argmax_k_a = " << argmax_k_a << "\n";
  os << "argmax_k_b = " << argmax_k_b << "\n";
  os << "argmax_k_s = " << argmax_k_s << "\n";
  return os.str();
}

void derive_thresholds(ConstantsReport& r, const PhysParams& p) {
  const double ka = p.kappa_a, kb = p.kappa_b, kt = p.kappa_s_tilde, al = p.alpha_s, be = p.beta;
  r.alpha_0 = 8.0 * r.c_star * r.k_s;
  const double kk = r.k_a * (1.0 + ka / kt) + r.k_b * (1.0 + kb / kt);
  r.beta_0 = 64.0 * r.c_star * r.c_star * kk * kk;
  // Coefficient of T^{1/2}: the sup-in-time part sees the full F bound, the
  // maximal-regularity part only the T^{1/2} pieces of each F_i bound.
  const double b15 = be * std::sqrt(be);
  const double f_all = (2.0 + (ka + kb) / kt) / std::sqrt(be) + (ka + kb) * b15 +
                       (1.0 + (ka + kb) * (be + 1.0)) / al;
  const double mr = r.k_a * ka * b15 + r.k_b * kb * b15 + r.k_s * (ka + kb) * (be + 1.0) / al;
  r.c_star_big = r.c_star * (f_all + mr);
  r.t_star = r.c_star_big > 0 ? std::min(1.0, std::pow(1.0 / (4.0 * r.c_star_big), 2)) : 1.0;
}

namespace {

struct Bump {
  double x0, y0, z0, sig, amp;
};

std::vector<double> bulk_bump(const GridSpec& g, const Bump& b) {
  std::vector<double> f(g.bulk_size());
  for (int i = 0; i < g.n_h; ++i)
    for (int j = 0; j < g.n_h; ++j) {
      double r2 = std::pow(g.x(i) - b.x0, 2) + std::pow(g.x(j) - b.y0, 2);
      for (int n = 0; n < g.n_z; ++n) {
        double d2 = r2 + std::pow(g.z(n) - b.z0, 2);
        f[(static_cast<std::size_t>(i) * g.n_h + j) * g.n_z + n] =
            b.amp * std::exp(-d2 / (2 * b.sig * b.sig));
      }
    }
  return f;
}

std::vector<double> surf_bump(const GridSpec& g, const Bump& b) {
  std::vector<double> f(g.surf_size());
  for (int i = 0; i < g.n_h; ++i)
    for (int j = 0; j < g.n_h; ++j) {
      double r2 = std::pow(g.x(i) - b.x0, 2) + std::pow(g.x(j) - b.y0, 2);
      f[static_cast<std::size_t>(i) * g.n_h + j] = b.amp * std::exp(-r2 / (2 * b.sig * b.sig));
    }
  return f;
}

struct ComponentNorms {
  double a, b, s;
};
ComponentNorms comp_norm2(const SpectralTri& c) {
  auto hm = hmodes(c.grid);
  const int nz = c.grid.n_z;
  double a = 0, b = 0, s = 0;
  for (std::size_t m = 0; m < hm.size(); ++m) {
    double ta = 0, tb = 0;
    for (int n = 0; n < nz; ++n) {
      ta += std::norm(c.c_a[m * nz + n]);
      tb += std::norm(c.c_b[m * nz + n]);
    }
    a += hm[m].w * ta;
    b += hm[m].w * tb;
    s += hm[m].w * std::norm(c.c_s[m]);
  }
  double area = c.grid.l_h * c.grid.l_h;
  return {area * 0.5 * c.grid.l_z * a, area * 0.5 * c.grid.l_z * b, area * s};
}

Bump random_bump(std::mt19937_64& rng, const GridSpec& g, bool bulk) {
  std::uniform_real_distribution<double> ux(-0.2 * g.l_h, 0.2 * g.l_h);
  std::uniform_real_distribution<double> uz(0.15 * g.l_z, 0.5 * g.l_z);
  std::uniform_real_distribution<double> us(0.5, 1.2);
  std::normal_distribution<double> na(0.0, 1.0);
  Bump b{ux(rng), ux(rng), bulk ? uz(rng) : 0.0, us(rng), na(rng)};
  return b;
}

struct TrialOut {
  double c = 0, ka = 0, kb = 0, ks = 0;
};

TrialOut run_trial(const GridSpec& g, const PhysParams& p, const ConstantsOptions& opt, int trial) {
  std::mt19937_64 rng(opt.seed + 7919ull * static_cast<std::uint64_t>(trial));
  std::uniform_real_distribution<double> ur(0.0, 20.0);
  const int nt = opt.steps;
  const double T = opt.horizon, dt = T / nt;
  std::vector<double> times(nt + 1);
  for (int j = 0; j <= nt; ++j) times[j] = j * dt;

  // Probe φ(t) = Σ_k e^{-r_k t} Φ_k, two bumps per component.
  SpectralTri base[2];
  double rate[2][3];
  for (int k = 0; k < 2; ++k) {
    base[k] = SpectralTri::zeros(g);
    base[k].c_a = bulk_forward(g, bulk_bump(g, random_bump(rng, g, true)));
    base[k].c_b = bulk_forward(g, bulk_bump(g, random_bump(rng, g, true)));
    base[k].c_s = surface_forward(g, surf_bump(g, random_bump(rng, g, false)));
    for (int c = 0; c < 3; ++c) rate[k][c] = ur(rng);
  }
  auto probe = [&](double t, bool deriv) {
    SpectralTri out = SpectralTri::zeros(g);
    for (int k = 0; k < 2; ++k) {
      double fa = std::exp(-rate[k][0] * t), fb = std::exp(-rate[k][1] * t),
             fs = std::exp(-rate[k][2] * t);
      if (deriv) {
        fa *= -rate[k][0];
        fb *= -rate[k][1];
        fs *= -rate[k][2];
      }
      for (std::size_t i = 0; i < out.c_a.size(); ++i) {
        out.c_a[i] += fa * base[k].c_a[i];
        out.c_b[i] += fb * base[k].c_b[i];
      }
      for (std::size_t i = 0; i < out.c_s.size(); ++i) out.c_s[i] += fs * base[k].c_s[i];
    }
    return out;
  };

  SpectralTrajectory phi;
  phi.grid = g;
  phi.times = times;
  std::vector<double> fa2(nt + 1), fb2(nt + 1), fs2(nt + 1);
  for (int j = 0; j <= nt; ++j) {
    phi.states.push_back(probe(times[j], false));
    phi.derivs.push_back(probe(times[j], true));
    ComponentNorms fn = comp_norm2(assemble_f(phi.states[j], phi.derivs[j], p));
    fa2[j] = fn.a;
    fb2[j] = fn.b;
    fs2[j] = fn.s;
  }
  const double x = xt_norm(phi, p);
  const double sb = std::sqrt(p.beta), rt = std::sqrt(T);
  const double pa = 1 / sb + p.kappa_a / (p.kappa_s_tilde * sb) + rt * p.kappa_a * p.beta * p.beta / sb;
  const double pb = 1 / sb + p.kappa_b / (p.kappa_s_tilde * sb) + rt * p.kappa_b * p.beta * p.beta / sb;
  const double ps = 1 / p.alpha_s + rt * (p.kappa_a + p.kappa_b) * (p.beta + 1) / p.alpha_s;
  TrialOut out;
  out.c = std::max({std::sqrt(trapezoid(times, fa2)) / (pa * x),
                    std::sqrt(trapezoid(times, fb2)) / (pb * x),
                    std::sqrt(trapezoid(times, fs2)) / (ps * x)});

  // Maximal regularity: U' + LU = F, U(0) = 0, one component at a time.
  std::uniform_real_distribution<double> uw(0.0, 40.0), uph(0.0, 6.283185307179586);
  for (int comp = 0; comp < 3; ++comp) {
    SpectralTri shape = SpectralTri::zeros(g);
    if (comp == 0) shape.c_a = bulk_forward(g, bulk_bump(g, random_bump(rng, g, true)));
    if (comp == 1) shape.c_b = bulk_forward(g, bulk_bump(g, random_bump(rng, g, true)));
    if (comp == 2) shape.c_s = surface_forward(g, surf_bump(g, random_bump(rng, g, false)));
    const double w = uw(rng), ph = uph(rng);
    std::vector<SpectralTri> forcing;
    std::vector<double> f2(nt + 1);
    for (int j = 0; j <= nt; ++j) {
      SpectralTri fj = axpy(std::cos(w * times[j] + ph) - 1.0, shape, shape);
      f2[j] = std::pow(spectral_norm(fj), 2);
      forcing.push_back(std::move(fj));
    }
    SpectralTrajectory u = duhamel_step(SpectralTri::zeros(g), forcing, T, p);
    std::vector<double> d2(nt + 1), l2(nt + 1);
    for (int j = 0; j <= nt; ++j) {
      d2[j] = std::pow(spectral_norm(u.derivs[j]), 2);
      l2[j] = std::pow(spectral_norm(apply_l_power(u.states[j], 1.0, p)), 2);
    }
    double fnorm = std::sqrt(trapezoid(times, f2));
    double k = fnorm > 0 ? (std::sqrt(trapezoid(times, d2)) + std::sqrt(trapezoid(times, l2))) / fnorm
                         : 0.0;
    (comp == 0 ? out.ka : comp == 1 ? out.kb : out.ks) = k;
  }
  return out;
}

}  // namespace

ConstantsReport estimate_constants(const GridSpec& grid, const PhysParams& params, int trials,
                                   const ConstantsOptions& opt) {
  if (trials < 1) throw DomainError("estimate_constants: trials must be >= 1");
  if (!(opt.horizon > 0 && opt.horizon <= 1)) throw DomainError("probe horizon must lie in (0,1]");
  grid.validate();
  params.validate();
  std::vector<TrialOut> outs(trials);
  parallel_for(static_cast<std::size_t>(trials),
               [&](std::size_t t) { outs[t] = run_trial(grid, params, opt, static_cast<int>(t)); });
  ConstantsReport r;
  r.trials = trials;
  r.seed = opt.seed;
  r.probe_horizon = opt.horizon;
  for (int t = 0; t < trials; ++t) {
    if (outs[t].c > r.c_star) { r.c_star = outs[t].c; r.argmax_c_star = t; }
    if (outs[t].ka > r.k_a) { r.k_a = outs[t].ka; r.argmax_k_a = t; }
    if (outs[t].kb > r.k_b) { r.k_b = outs[t].kb; r.argmax_k_b = t; }
    if (outs[t].ks > r.k_s) { r.k_s = outs[t].ks; r.argmax_k_s = t; }
  }
  derive_thresholds(r, params);
  return r;
}

}  // namespace triphase
