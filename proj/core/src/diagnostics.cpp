#include "triphase/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "triphase/beta_lift.hpp"
#include "triphase/errors.hpp"
#include "triphase/interface.hpp"
#include "triphase/spectral.hpp"

namespace triphase {

EnergySample energy_sample(const TriField& theta, double t, const PhysParams& p) {
  const MixedTri mt = to_mixed(theta, p);
  const GridSpec& g = theta.grid;
  const LiftProfile& lp = lift_profile(p.beta, g);
  const auto hm = hmodes(g);
  const int nz = g.n_z;
  double ea = 0, eb = 0, es = 0, da = 0, db = 0, ds = 0;
  for (std::size_t m = 0; m < hm.size(); ++m) {
    const cplx* a = &mt.a.coeff[m * nz];
    const cplx* b = &mt.b.coeff[m * nz];
    const double w = hm[m].w;
    ea += w * mixed_inner_mode(lp, a, mt.a.amp[m], a, mt.a.amp[m]).real();
    eb += w * mixed_inner_mode(lp, b, mt.b.amp[m], b, mt.b.amp[m]).real();
    da += w * mixed_grad_inner_mode(lp, hm[m].q, a, mt.a.amp[m], a, mt.a.amp[m]).real();
    db += w * mixed_grad_inner_mode(lp, hm[m].q, b, mt.b.amp[m], b, mt.b.amp[m]).real();
    es += w * std::norm(mt.s[m]);
    ds += w * hm[m].q * std::norm(mt.s[m]);
  }
  const double area = g.l_h * g.l_h;
  EnergySample e;
  e.t = t;
  e.bulk_a = area * ea;
  e.bulk_b = area * eb;
  e.surf = area * p.alpha_s * es;
  e.diss_a = area * p.kappa_a * da;
  e.diss_b = area * p.kappa_b * db;
  e.diss_s = area * p.kappa_s() * ds;
  return e;
}

EnergyLedger energy_ledger(std::vector<EnergySample> samples) {
  EnergyLedger led;
  led.samples = std::move(samples);
  const std::size_t n = led.samples.size();
  led.total.resize(n);
  double acc = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0)
      acc += (led.samples[j].t - led.samples[j - 1].t) *
             (led.samples[j].dissipation() + led.samples[j - 1].dissipation());
    led.total[j] = led.samples[j].energy() + acc;
  }
  // Relative defect for every ordered pair; E(t₁) = 0 only for the zero state,
  // whose pairs then carry an absolute defect.
  for (std::size_t i = 0; i < n; ++i) {
    const double e1 = led.samples[i].energy();
    const double scale = e1 > 0 ? e1 : 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      led.max_defect = std::max(led.max_defect, std::abs(led.total[j] - led.total[i]) / scale);
      led.max_increase = std::max(led.max_increase, led.samples[j].energy() - e1);
    }
  }
  return led;
}

EnergyLedger energy_ledger(const Trajectory& traj, const PhysParams& p) {
  if (!traj.energy_ledger.empty()) return energy_ledger(traj.energy_ledger);
  std::vector<EnergySample> s;
  s.reserve(traj.states.size());
  for (std::size_t j = 0; j < traj.states.size(); ++j)
    s.push_back(energy_sample(traj.states[j], traj.times[j], p));
  return energy_ledger(std::move(s));
}

Table EnergyLedger::table() const {
  Table t;
  t.header = {"time",           "bulk_a_l2sq",     "bulk_b_l2sq",     "alpha_s_surface_l2sq",
              "kappa_a_grad_a", "kappa_b_grad_b", "kappa_s_grad_s", "energy",
              "energy_plus_twice_dissipation", "relative_defect_from_t0"};
  const double e0 = samples.empty() ? 0.0 : samples.front().energy();
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const EnergySample& s = samples[j];
    const double d = e0 > 0 ? std::abs(total[j] - total[0]) / e0 : std::abs(total[j] - total[0]);
    t.add({s.t, s.bulk_a, s.bulk_b, s.surf, s.diss_a, s.diss_b, s.diss_s, s.energy(), total[j], d});
  }
  return t;
}

ContinuityReport initial_continuity(const Trajectory& traj, const TriField& theta0,
                                    std::size_t count, const std::vector<double>& at) {
  ContinuityReport r;
  r.table.header = {"time", "diff_a_l2", "diff_b_l2", "diff_s_l2", "diff_h"};
  std::vector<std::size_t> idx;
  if (at.empty()) {
    for (std::size_t j = 0; j < traj.times.size() && idx.size() < count; ++j)
      if (traj.times[j] > 0) idx.push_back(j);
  } else {
    for (double t : at) {
      auto it = std::find_if(traj.times.begin(), traj.times.end(), [t](double s) {
        return std::abs(s - t) <= 1e-9 * std::max(1.0, std::abs(t));
      });
      if (it == traj.times.end()) throw StateError("initial_continuity: requested time not stored");
      idx.push_back(static_cast<std::size_t>(it - traj.times.begin()));
    }
  }
  const GridSpec& g = theta0.grid;
  const double dx2 = g.dx() * g.dx(), dz = g.dz();
  for (std::size_t j : idx) {
    const TriField& th = traj.states[j];
    if (!same_shape(th.grid, g)) throw ConfigError("initial_continuity: grid mismatch");
    double a = 0, b = 0, s = 0;
    for (std::size_t k = 0; k < th.f_a.size(); ++k) {
      a += std::pow(th.f_a[k] - theta0.f_a[k], 2);
      b += std::pow(th.f_b[k] - theta0.f_b[k], 2);
    }
    for (std::size_t k = 0; k < th.f_s.size(); ++k) s += std::pow(th.f_s[k] - theta0.f_s[k], 2);
    a *= dx2 * dz;
    b *= dx2 * dz;
    s *= dx2;
    const double h = std::sqrt(a + b + s);
    r.t.push_back(traj.times[j]);
    r.diff.push_back(h);
    r.table.add({traj.times[j], std::sqrt(a), std::sqrt(b), std::sqrt(s), h});
  }
  // Least squares on log diff = log C + p log t over positive entries.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < r.t.size(); ++k) {
    if (!(r.diff[k] > 0)) continue;
    const double x = std::log(r.t[k]), y = std::log(r.diff[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2 && n * sxx - sx * sx > 0) {
    r.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    r.constant = std::exp((sy - r.exponent * sx) / n);
  }
  return r;
}

TraceGapReport trace_gap(const Trajectory& traj, bool use_stored) {
  TraceGapReport r;
  r.table.header = {"time", "gap_upper_l2", "gap_lower_l2"};
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    const TriField& th = traj.states[j];
    const GridSpec& g = th.grid;
    std::vector<double> ta, tb;
    if (use_stored && th.has_traces()) {
      ta = th.trace_a;
      tb = th.trace_b;
    } else {
      ta = trace_plus(g, th.f_a, TraceMethod::Extrapolate);
      tb = trace_minus(g, th.f_b, TraceMethod::Extrapolate);
    }
    double ga = 0, gb = 0;
    for (std::size_t c = 0; c < g.surf_size(); ++c) {
      ga += std::pow(ta[c] - th.f_s[c], 2);
      gb += std::pow(tb[c] - th.f_s[c], 2);
    }
    ga = std::sqrt(ga * g.dx() * g.dx());
    gb = std::sqrt(gb * g.dx() * g.dx());
    r.max_gap_a = std::max(r.max_gap_a, ga);
    r.max_gap_b = std::max(r.max_gap_b, gb);
    r.table.add({traj.times[j], ga, gb});
  }
  return r;
}

HolderReport holder_probe(const Trajectory& traj, const PhysParams& p, double q, double t_lo,
                          double t_hi) {
  if (!(q > 0 && q <= 1)) throw DomainError("holder_probe: q must lie in (0, 1]");
  HolderReport r;
  r.table.header = {"separation", "pairs", "max_ratio"};
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < traj.times.size(); ++j)
    if (traj.times[j] >= t_lo - 1e-12 && traj.times[j] <= t_hi + 1e-12) idx.push_back(j);
  if (idx.size() < 2) return r;
  std::vector<SpectralTri> lv;
  lv.reserve(idx.size());
  for (std::size_t j : idx)
    lv.push_back(apply_l_power(to_spectral(lift_to_u(traj.states[j], p)), 1.0, p));
  for (std::size_t sep = 1; sep < idx.size(); sep *= 2) {
    double best = 0;
    std::size_t pairs = 0;
    for (std::size_t k = 0; k + sep < idx.size(); ++k) {
      const double dt = traj.times[idx[k + sep]] - traj.times[idx[k]];
      const double d = spectral_norm(axpy(-1.0, lv[k], lv[k + sep]));
      best = std::max(best, d / std::pow(dt, q));
      ++pairs;
    }
    const double dt0 = traj.times[idx[sep]] - traj.times[idx[0]];
    r.table.add({dt0, static_cast<double>(pairs), best});
    r.max_ratio = std::max(r.max_ratio, best);
  }
  return r;
}

TriField resample_theta(const TriField& theta, const GridSpec& fine, const PhysParams& p) {
  const GridSpec& g = theta.grid;
  if (fine.l_h != g.l_h || fine.l_z != g.l_z) throw ConfigError("resample_theta: box differs");
  if (fine.n_h < g.n_h || fine.n_z < g.n_z) throw ConfigError("resample_theta: target is coarser");
  const SpectralTri c = to_spectral(lift_to_u(theta, p));
  SpectralTri f = SpectralTri::zeros(fine);
  f.weight_s = theta.weight_s;
  const int nhc = g.n_hc(), fhc = fine.n_hc();
  for (int i = 0; i < g.n_h; ++i) {
    if (2 * i == g.n_h && fine.n_h != g.n_h) continue;  // coarse Nyquist has no unique fine image
    const int k = i < g.n_h / 2 ? i : i - g.n_h;
    const int fi = k >= 0 ? k : k + fine.n_h;
    for (int j = 0; j < nhc; ++j) {
      if (2 * j == g.n_h && fine.n_h != g.n_h) continue;
      const std::size_t cm = static_cast<std::size_t>(i) * nhc + j;
      const std::size_t fm = static_cast<std::size_t>(fi) * fhc + j;
      f.c_s[fm] = c.c_s[cm];
      for (int n = 0; n < g.n_z; ++n) {
        f.c_a[fm * fine.n_z + n] = c.c_a[cm * g.n_z + n];
        f.c_b[fm * fine.n_z + n] = c.c_b[cm * g.n_z + n];
      }
    }
  }
  return lower_to_theta(from_spectral(f), p);
}

OracleComparison oracle_difference(const Trajectory& spectral, const InitialData& data,
                                   const PhysParams& p, int multiplier,
                                   oracle::OracleOptions opt) {
  if (spectral.times.size() < 2) throw StateError("oracle_difference: need at least two states");
  const GridSpec& g = spectral.states.front().grid;
  const double sample = spectral.times[1] - spectral.times[0];
  for (std::size_t j = 1; j < spectral.times.size(); ++j)
    if (std::abs(spectral.times[j] - spectral.times[j - 1] - sample) > 1e-9 * sample)
      throw StateError("oracle_difference: spectral states must be uniformly spaced");
  OracleComparison r;
  const GridSpec fine = g.refined(multiplier);
  r.oracle_h = fine.dz();
  opt.sample_dt = sample;
  opt.keep_states = false;
  opt.observer = [&](double t, const TriField& th) {
    const std::size_t j = static_cast<std::size_t>(std::llround(t / sample));
    if (j >= spectral.states.size()) return;
    const TriField sp = resample_theta(spectral.states[j], fine, p);
    r.times.push_back(t);
    r.diff.push_back(h_norm(sp - th));
  };
  oracle::oracle_solve(data, g, spectral.times.back(), p, multiplier, opt);
  std::vector<double> d2(r.diff.size());
  for (std::size_t k = 0; k < d2.size(); ++k) d2[k] = r.diff[k] * r.diff[k];
  r.l2 = std::sqrt(trapezoid(r.times, d2));
  return r;
}

}  // namespace triphase
