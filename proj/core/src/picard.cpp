#include "triphase/picard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "triphase/beta_lift.hpp"
#include "triphase/errors.hpp"
#include "triphase/parallel.hpp"
#include "triphase/table.hpp"

namespace triphase {

void SolverConfig::validate() const {
  if (!(window_t > 0) || window_t > 1) throw ConfigError("window_t must lie in (0, 1]");
  if (max_picard_iters < 1) throw ConfigError("max_picard_iters must be >= 1");
  if (!(picard_tol > 0)) throw ConfigError("picard_tol must be positive");
  if (!(contraction_target > 0 && contraction_target < 1))
    throw ConfigError("contraction_target must lie in (0, 1)");
  if (store_every < 1) throw ConfigError("store_every must be >= 1");
}

std::string SolverReport::to_csv() const {
  std::ostringstream os;
  os << "window,iteration,increment_xt,contraction_ratio,xt_norm,apriori_bound,apriori_slack\r\n";
  for (const PicardRow& r : rows)
    os << r.window << ',' << r.m << ',' << format_double(r.increment) << ','
       << format_double(r.ratio) << ',' << format_double(r.xt_norm) << ','
       << format_double(r.apriori) << ',' << format_double(r.slack()) << "\r\n";
  return os.str();
}

EtdWeights etd_weights(double lam, double dt) {
  const double x = lam * dt;
  EtdWeights w;
  w.e = std::exp(-x);
  if (std::abs(x) < 1e-3) {
    // Taylor tails; the closed forms cancel badly here.
    const double phi1 = 1 - x / 2 + x * x / 6 - x * x * x / 24 + x * x * x * x / 120;
    const double phi2 = 0.5 - x / 6 + x * x / 24 - x * x * x / 120 + x * x * x * x / 720;
    w.w0 = dt * phi1;
    w.w1 = dt * phi2;
  } else {
    const double em = std::expm1(-x);
    w.w0 = dt * (-em / x);
    w.w1 = dt * (x + em) / (x * x);
  }
  return w;
}

namespace {

// Window path in mode-major layout: bulk [mode][node][n], surface [mode][node].
struct Path {
  std::size_t modes = 0, nodes = 0;
  int nz = 0;
  std::vector<cplx> a, b, s, da, db, ds;

  Path(std::size_t m, std::size_t t, int n)
      : modes(m), nodes(t), nz(n), a(m * t * n), b(m * t * n), s(m * t), da(m * t * n),
        db(m * t * n), ds(m * t) {}
  std::size_t bulk(std::size_t m, std::size_t j) const { return (m * nodes + j) * nz; }
  std::size_t surf(std::size_t m, std::size_t j) const { return m * nodes + j; }
};

// Per-mode spectral data shared by every Picard sweep of a window.
struct ModeTables {
  std::vector<HMode> hm;
  std::vector<double> lam_a, lam_b, lam_s;  // [mode][n] and [mode]
  std::vector<EtdWeights> w_a, w_b, w_s;
};

ModeTables mode_tables(const GridSpec& g, const PhysParams& p, double dt) {
  ModeTables t;
  t.hm = hmodes(g);
  Eigen e = eigenvalues(g, p);
  t.lam_a = std::move(e.a);
  t.lam_b = std::move(e.b);
  t.lam_s = std::move(e.s);
  t.w_a.resize(t.lam_a.size());
  t.w_b.resize(t.lam_b.size());
  t.w_s.resize(t.lam_s.size());
  for (std::size_t k = 0; k < t.lam_a.size(); ++k) {
    t.w_a[k] = etd_weights(t.lam_a[k], dt);
    t.w_b[k] = etd_weights(t.lam_b[k], dt);
  }
  for (std::size_t k = 0; k < t.lam_s.size(); ++k) t.w_s[k] = etd_weights(t.lam_s[k], dt);
  return t;
}

// Squared-norm ingredients per node: H, d/dt, L; for the increment and the new iterate.
struct NodeNorms {
  std::vector<double> inc_h, inc_d, inc_l, new_h, new_d, new_l;
  explicit NodeNorms(std::size_t n)
      : inc_h(n), inc_d(n), inc_l(n), new_h(n), new_d(n), new_l(n) {}
};

struct XtParts {
  double inc = 0, xt = 0;
};

XtParts reduce_norms(const std::vector<NodeNorms>& per_mode, const std::vector<double>& times) {
  const std::size_t nodes = times.size();
  std::vector<double> ih(nodes), id(nodes), il(nodes), nh(nodes), nd(nodes), nl(nodes);
  for (const NodeNorms& nn : per_mode)
    for (std::size_t j = 0; j < nodes; ++j) {
      ih[j] += nn.inc_h[j];
      id[j] += nn.inc_d[j];
      il[j] += nn.inc_l[j];
      nh[j] += nn.new_h[j];
      nd[j] += nn.new_d[j];
      nl[j] += nn.new_l[j];
    }
  auto xt = [&](const std::vector<double>& h, const std::vector<double>& d,
                const std::vector<double>& l) {
    double sup = 0;
    for (double v : h) sup = std::max(sup, v);
    return std::sqrt(sup) + std::sqrt(std::max(0.0, trapezoid(times, d))) +
           std::sqrt(std::max(0.0, trapezoid(times, l)));
  };
  return {xt(ih, id, il), xt(nh, nd, nl)};
}

// One Picard sweep for one horizontal mode: forcing from `old`, Duhamel march
// into `out`, norm ingredients into `nn`.
void sweep_mode(std::size_t m, const Path& old, Path& out, const ModeTables& tab,
                const LiftProfile& lp, const PhysParams& p, const GridSpec& g, NodeNorms& nn) {
  const int nz = old.nz;
  const std::size_t nodes = old.nodes;
  const double q = tab.hm[m].q, wgt = tab.hm[m].w * g.l_h * g.l_h, half = 0.5 * g.l_z;
  const double b2 = p.beta * p.beta;
  const double ca = p.kappa_a * (b2 - q), cb = p.kappa_b * (b2 - q);
  const double s_coef = (p.kappa_a + p.kappa_b) * (b2 * (lp.p + lp.m) + q * lp.eps);

  std::vector<cplx> fa(nodes), fb(nodes), f3(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const cplx s = old.s[old.surf(m, j)], ds = old.ds[old.surf(m, j)];
    const cplx* a = &old.a[old.bulk(m, j)];
    const cplx* b = &old.b[old.bulk(m, j)];
    cplx ga = 0, gb = 0;
    for (int n = 0; n < nz; ++n) {
      ga += lp.g[n] * a[n];
      gb += lp.g[n] * b[n];
    }
    fa[j] = -ds + ca * s;
    fb[j] = -ds + cb * s;
    f3[j] = (p.kappa_a * ga + p.kappa_b * gb - s_coef * s - 2.0 * lp.eps * ds) / p.alpha_s;
  }

  const double* la = &tab.lam_a[m * nz];
  const double* lb = &tab.lam_b[m * nz];
  const EtdWeights* wa = &tab.w_a[m * nz];
  const EtdWeights* wb = &tab.w_b[m * nz];
  const double ls = tab.lam_s[m];
  const EtdWeights ws = tab.w_s[m];

  for (std::size_t j = 0; j < nodes; ++j) {
    cplx* a = &out.a[out.bulk(m, j)];
    cplx* b = &out.b[out.bulk(m, j)];
    cplx* da = &out.da[out.bulk(m, j)];
    cplx* db = &out.db[out.bulk(m, j)];
    if (j > 0) {
      const cplx* a0 = &out.a[out.bulk(m, j - 1)];
      const cplx* b0 = &out.b[out.bulk(m, j - 1)];
      for (int n = 0; n < nz; ++n) {
        a[n] = wa[n].e * a0[n] + (wa[n].w0 * fa[j - 1] + wa[n].w1 * (fa[j] - fa[j - 1])) * lp.P[n];
        b[n] = wb[n].e * b0[n] + (wb[n].w0 * fb[j - 1] + wb[n].w1 * (fb[j] - fb[j - 1])) * lp.P[n];
      }
      const std::size_t k = out.surf(m, j);
      out.s[k] = ws.e * out.s[k - 1] + ws.w0 * f3[j - 1] + ws.w1 * (f3[j] - f3[j - 1]);
    } else {
      const std::size_t o = old.bulk(m, 0);
      std::copy(&old.a[o], &old.a[o] + nz, a);
      std::copy(&old.b[o], &old.b[o] + nz, b);
      out.s[out.surf(m, 0)] = old.s[old.surf(m, 0)];
    }
    const std::size_t k = out.surf(m, j);
    out.ds[k] = -ls * out.s[k] + f3[j];

    const cplx* ao = &old.a[old.bulk(m, j)];
    const cplx* bo = &old.b[old.bulk(m, j)];
    const cplx* dao = &old.da[old.bulk(m, j)];
    const cplx* dbo = &old.db[old.bulk(m, j)];
    double ih = 0, id = 0, il = 0, nh = 0, nd = 0, nl = 0;
    for (int n = 0; n < nz; ++n) {
      da[n] = -la[n] * a[n] + fa[j] * lp.P[n];
      db[n] = -lb[n] * b[n] + fb[j] * lp.P[n];
      const double pa = std::norm(a[n]), pb = std::norm(b[n]);
      const double qa = std::norm(a[n] - ao[n]), qb = std::norm(b[n] - bo[n]);
      nh += pa + pb;
      ih += qa + qb;
      nd += std::norm(da[n]) + std::norm(db[n]);
      id += std::norm(da[n] - dao[n]) + std::norm(db[n] - dbo[n]);
      nl += la[n] * la[n] * pa + lb[n] * lb[n] * pb;
      il += la[n] * la[n] * qa + lb[n] * lb[n] * qb;
    }
    const cplx s = out.s[k], ds = out.ds[k];
    const cplx dsn = s - old.s[k], ddsn = ds - old.ds[k];
    nn.new_h[j] = wgt * (half * nh + std::norm(s));
    nn.inc_h[j] = wgt * (half * ih + std::norm(dsn));
    nn.new_d[j] = wgt * (half * nd + std::norm(ds));
    nn.inc_d[j] = wgt * (half * id + std::norm(ddsn));
    nn.new_l[j] = wgt * (half * nl + ls * ls * std::norm(s));
    nn.inc_l[j] = wgt * (half * il + ls * ls * std::norm(dsn));
  }
}

// First iterate: e^{-tL}v₀ or v₀ held constant.
void start_path(Path& path, const SpectralTri& v0, const ModeTables& tab,
                const std::vector<double>& times, PicardStart start) {
  const int nz = path.nz;
  parallel_for(path.modes, [&](std::size_t m) {
    for (std::size_t j = 0; j < path.nodes; ++j) {
      const double t = times[j] - times[0];
      for (int n = 0; n < nz; ++n) {
        const std::size_t src = m * nz + n, dst = path.bulk(m, j) + n;
        if (start == PicardStart::Frozen) {
          path.a[dst] = v0.c_a[src];
          path.b[dst] = v0.c_b[src];
          path.da[dst] = path.db[dst] = 0.0;
        } else {
          const double la = tab.lam_a[src], lb = tab.lam_b[src];
          path.a[dst] = std::exp(-la * t) * v0.c_a[src];
          path.b[dst] = std::exp(-lb * t) * v0.c_b[src];
          path.da[dst] = -la * path.a[dst];
          path.db[dst] = -lb * path.b[dst];
        }
      }
      const std::size_t k = path.surf(m, j);
      if (start == PicardStart::Frozen) {
        path.s[k] = v0.c_s[m];
        path.ds[k] = 0.0;
      } else {
        path.s[k] = std::exp(-tab.lam_s[m] * t) * v0.c_s[m];
        path.ds[k] = -tab.lam_s[m] * path.s[k];
      }
    }
  });
}

SpectralTri node_state(const Path& path, std::size_t j, const GridSpec& g, bool deriv) {
  SpectralTri c = SpectralTri::zeros(g);
  const int nz = path.nz;
  for (std::size_t m = 0; m < path.modes; ++m) {
    const std::size_t o = path.bulk(m, j);
    for (int n = 0; n < nz; ++n) {
      c.c_a[m * nz + n] = deriv ? path.da[o + n] : path.a[o + n];
      c.c_b[m * nz + n] = deriv ? path.db[o + n] : path.b[o + n];
    }
    c.c_s[m] = deriv ? path.ds[path.surf(m, j)] : path.s[path.surf(m, j)];
  }
  return c;
}

void check_hypotheses(const ConstantsReport* c, const PhysParams& p, SolverReport& rep) {
  if (!c) return;
  char buf[200];
  if (!(p.alpha_s > c->alpha_0)) {
    std::snprintf(buf, sizeof buf, "alpha_s = %.6g does not exceed measured alpha_0 = %.6g",
                  p.alpha_s, c->alpha_0);
    rep.warnings.emplace_back(buf);
  }
  if (!(p.beta > c->beta_0)) {
    std::snprintf(buf, sizeof buf, "beta = %.6g does not exceed measured beta_0 = %.6g", p.beta,
                  c->beta_0);
    rep.warnings.emplace_back(buf);
  }
}

struct WindowRun {
  Path path;
  SolverReport report;
  std::vector<double> times;
};

WindowRun run_window(const SpectralTri& v0, int steps, double t0, const SolverConfig& cfg,
                     const PhysParams& p, const PicardOptions& opt) {
  const GridSpec& g = v0.grid;
  const double dt = g.dt;
  const std::size_t nodes = static_cast<std::size_t>(steps) + 1;
  const ModeTables tab = mode_tables(g, p, dt);
  const LiftProfile& lp = lift_profile(p.beta, g);

  WindowRun run{Path(g.hmodes(), nodes, g.n_z), {}, std::vector<double>(nodes)};
  for (std::size_t j = 0; j < nodes; ++j) run.times[j] = t0 + static_cast<double>(j) * dt;
  run.report.window_t = steps * dt;
  run.report.windows = 1;
  check_hypotheses(opt.constants, p, run.report);
  if (opt.constants) run.report.constants = *opt.constants;

  const double apriori =
      2.0 * spectral_norm(v0) + 4.0 * spectral_norm(apply_l_power(v0, 0.5, p));

  start_path(run.path, v0, tab, run.times, opt.start);
  Path next(g.hmodes(), nodes, g.n_z);
  std::vector<NodeNorms> norms(g.hmodes(), NodeNorms(nodes));
  double prev = std::numeric_limits<double>::quiet_NaN();
  int above_one = 0;
  run.report.converged = false;
  run.report.max_ratio = 0;
  for (int it = 1; it <= cfg.max_picard_iters; ++it) {
    parallel_for(g.hmodes(), [&](std::size_t m) {
      sweep_mode(m, run.path, next, tab, lp, p, g, norms[m]);
    });
    std::swap(run.path, next);
    const XtParts xp = reduce_norms(norms, run.times);
    PicardRow row;
    row.window = opt.window_index;
    row.m = it;
    row.increment = xp.inc;
    row.ratio = it == 1 ? std::numeric_limits<double>::quiet_NaN()
                        : (prev > 0 ? xp.inc / prev : 0.0);
    row.xt_norm = xp.xt;
    row.apriori = apriori;
    run.report.rows.push_back(row);
    if (it > 1 && std::isfinite(row.ratio))
      run.report.max_ratio = std::max(run.report.max_ratio, row.ratio);
    if (xp.inc < cfg.picard_tol) {
      run.report.converged = true;
      break;
    }
    above_one = (it > 1 && row.ratio > 1.0) ? above_one + 1 : 0;
    if (above_one >= 3)
      throw NonconvergenceError(
          "Picard increments grew for 3 consecutive iterations in window " +
              std::to_string(opt.window_index),
          run.report, opt.window_index);
    prev = xp.inc;
  }
  if (!run.report.converged) {
    run.report.warnings.push_back("window " + std::to_string(opt.window_index) +
                                  ": increment above picard_tol after max_picard_iters");
  }
  return run;
}

int window_steps(double window_t, double dt) {
  const int n = static_cast<int>(std::floor(window_t / dt + 1e-9));
  if (n < 1) throw ConfigError("window_t is shorter than one time step");
  return n;
}

}  // namespace

SpectralTrajectory duhamel_step(const SpectralTri& v0, const std::vector<SpectralTri>& forcing,
                                double T, const PhysParams& params) {
  if (forcing.size() < 2) throw ConfigError("duhamel_step: forcing needs at least two nodes");
  if (!(T > 0)) throw ConfigError("duhamel_step: window length must be positive");
  for (const SpectralTri& f : forcing)
    if (!same_shape(f.grid, v0.grid) || f.c_a.size() != v0.c_a.size())
      throw ConfigError("duhamel_step: forcing grid does not match the state");
  const GridSpec& g = v0.grid;
  const std::size_t nodes = forcing.size();
  const double dt = T / static_cast<double>(nodes - 1);
  Eigen e = eigenvalues(g, params);

  SpectralTrajectory out;
  out.grid = g;
  out.times.resize(nodes);
  for (std::size_t j = 0; j < nodes; ++j) out.times[j] = static_cast<double>(j) * dt;
  out.states.assign(nodes, SpectralTri::zeros(g));
  out.derivs.assign(nodes, SpectralTri::zeros(g));
  out.states[0] = v0;

  auto march = [&](auto member, const std::vector<double>& lam) {
    parallel_for(lam.size(), [&](std::size_t k) {
      const EtdWeights w = etd_weights(lam[k], dt);
      for (std::size_t j = 0; j < nodes; ++j) {
        if (j > 0) {
          const cplx f0 = (forcing[j - 1].*member)[k], f1 = (forcing[j].*member)[k];
          (out.states[j].*member)[k] = w.e * (out.states[j - 1].*member)[k] + w.w0 * f0 + w.w1 * (f1 - f0);
        }
        (out.derivs[j].*member)[k] = -lam[k] * (out.states[j].*member)[k] + (forcing[j].*member)[k];
      }
    });
  };
  march(&SpectralTri::c_a, e.a);
  march(&SpectralTri::c_b, e.b);
  march(&SpectralTri::c_s, e.s);
  for (std::size_t j = 0; j < nodes; ++j) {
    out.states[j].weight_s = v0.weight_s;
    out.derivs[j].weight_s = v0.weight_s;
  }
  return out;
}

double xt_norm(const SpectralTrajectory& traj, const PhysParams& params) {
  if (traj.states.empty()) throw StateError("xt_norm: empty trajectory");
  if (traj.derivs.size() != traj.states.size())
    throw StateError("xt_norm: trajectory has no stored derivatives");
  double sup = 0;
  std::vector<double> d2(traj.states.size()), l2(traj.states.size());
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    sup = std::max(sup, spectral_norm(traj.states[j]));
    d2[j] = std::pow(spectral_norm(traj.derivs[j]), 2);
    l2[j] = std::pow(spectral_norm(apply_l_power(traj.states[j], 1.0, params)), 2);
  }
  return sup + std::sqrt(trapezoid(traj.times, d2)) + std::sqrt(trapezoid(traj.times, l2));
}

WindowResult picard_window(const SpectralTri& v0, const SolverConfig& config,
                           const PhysParams& params, const PicardOptions& opt) {
  config.validate();
  params.validate();
  v0.grid.validate();
  const int steps = window_steps(config.window_t, v0.grid.dt);
  WindowRun run = run_window(v0, steps, 0.0, config, params, opt);
  WindowResult res;
  res.report = std::move(run.report);
  res.path.grid = v0.grid;
  res.path.times = run.times;
  for (std::size_t j = 0; j < run.times.size(); ++j) {
    res.path.states.push_back(node_state(run.path, j, v0.grid, false));
    res.path.derivs.push_back(node_state(run.path, j, v0.grid, true));
  }
  return res;
}

std::pair<Trajectory, SolverReport> picard_iterate(const TriField& v0, const SolverConfig& config,
                                                   const PhysParams& params,
                                                   const PicardOptions& opt) {
  v0.check();
  const GridSpec& g = v0.grid;
  // Stored traces are authoritative; without them the quadratic extrapolation
  // carries an O(dz³) error of its own which the tolerance accounts for.
  double gap = 0, scale = 0;
  for (double x : v0.f_a) scale = std::max(scale, std::abs(x));
  for (double x : v0.f_b) scale = std::max(scale, std::abs(x));
  double tol = 1e-8;
  if (v0.has_traces()) {
    for (std::size_t c = 0; c < g.surf_size(); ++c)
      gap = std::max({gap, std::abs(v0.trace_a[c]), std::abs(v0.trace_b[c])});
  } else {
    auto ta = trace_plus(g, v0.f_a, TraceMethod::Extrapolate);
    auto tb = trace_minus(g, v0.f_b, TraceMethod::Extrapolate);
    for (std::size_t c = 0; c < g.surf_size(); ++c)
      gap = std::max({gap, std::abs(ta[c]), std::abs(tb[c])});
    tol += 10.0 * std::pow(g.dz(), 3) * scale;
  }
  if (gap > tol)
    throw DataError("picard_iterate: initial bulk data has nonzero interface trace " +
                        std::to_string(gap),
                    gap);
  WindowResult w = picard_window(to_spectral(v0), config, params, opt);
  return {from_spectral(w.path, config.store_every), std::move(w.report)};
}

EnergySample lifted_energy_sample(const SpectralTri& v, double t, const PhysParams& p) {
  const GridSpec& g = v.grid;
  const LiftProfile& lp = lift_profile(p.beta, g);
  const auto hm = hmodes(g);
  const int nz = g.n_z;
  double ea = 0, eb = 0, es = 0, da = 0, db = 0, ds = 0;
  for (std::size_t m = 0; m < hm.size(); ++m) {
    const cplx* a = &v.c_a[m * nz];
    const cplx* b = &v.c_b[m * nz];
    const cplx s = v.c_s[m];
    const double w = hm[m].w;
    ea += w * mixed_inner_mode(lp, a, s, a, s).real();
    eb += w * mixed_inner_mode(lp, b, s, b, s).real();
    da += w * mixed_grad_inner_mode(lp, hm[m].q, a, s, a, s).real();
    db += w * mixed_grad_inner_mode(lp, hm[m].q, b, s, b, s).real();
    es += w * std::norm(s);
    ds += w * hm[m].q * std::norm(s);
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

AdaptResult adapt_window(const SolverConfig& config, const ConstantsReport& constants, double dt,
                         const SolverReport* last) {
  AdaptResult r{config, false};
  double cap = 1.0;
  if (constants.c_star_big > 0) cap = std::min(cap, std::pow(1.0 / (4.0 * constants.c_star_big), 2));
  r.config.window_t = std::min(config.window_t, cap);
  if (last && last->max_ratio > config.contraction_target) {
    r.config.window_t = 0.5 * std::min(r.config.window_t, last->window_t > 0 ? last->window_t : r.config.window_t);
    r.rerun = true;
  }
  if (r.config.window_t < dt * (1 - 1e-12))
    throw ConfigError("adapt_window: window_t fell below the time step");
  return r;
}

Trajectory solve_global(const TriField& theta0, double t_end, const SolverConfig& config,
                        const PhysParams& params, SolverReport* report,
                        const ConstantsReport* constants) {
  config.validate();
  params.validate();
  GridSpec g = theta0.grid;
  g.t_end = t_end;
  g.validate();
  const int total = g.steps();

  TriField u0 = lift_to_u(theta0, params);
  SpectralTri v = to_spectral(u0);
  v.grid = g;

  SolverConfig cfg = config;
  if (cfg.adapt_window && constants) cfg = adapt_window(cfg, *constants, g.dt).config;

  Trajectory out;
  SolverReport agg;
  agg.window_t = cfg.window_t;
  agg.converged = true;
  if (constants) agg.constants = *constants;
  check_hypotheses(constants, params, agg);

  auto store = [&](const SpectralTri& state, const SpectralTri& deriv, double t) {
    out.times.push_back(t);
    out.states.push_back(lower_to_theta(from_spectral(state), params));
    out.derivs.push_back(lower_to_theta(from_spectral(deriv), params));
  };

  int done = 0, window = 0;
  while (done < total) {
    const int steps = std::min(window_steps(cfg.window_t, g.dt), total - done);
    PicardOptions opt;
    opt.constants = nullptr;  // hypotheses were checked once above
    opt.window_index = window;
    WindowRun run = [&] {
      try {
        return run_window(v, steps, done * g.dt, cfg, params, opt);
      } catch (const NonconvergenceError& e) {
        SolverReport partial = agg;
        partial.rows.insert(partial.rows.end(), e.report().rows.begin(), e.report().rows.end());
        partial.converged = false;
        throw NonconvergenceError(e.what(), partial, window);
      }
    }();
    if (cfg.adapt_window && constants && run.report.max_ratio > cfg.contraction_target) {
      AdaptResult ad = adapt_window(cfg, *constants, g.dt, &run.report);
      agg.warnings.push_back("window " + std::to_string(window) + ": ratio above target, window_t -> " +
                             std::to_string(ad.config.window_t));
      cfg = ad.config;
      agg.window_t = cfg.window_t;
      continue;
    }
    agg.rows.insert(agg.rows.end(), run.report.rows.begin(), run.report.rows.end());
    agg.warnings.insert(agg.warnings.end(), run.report.warnings.begin(), run.report.warnings.end());
    agg.converged = agg.converged && run.report.converged;
    agg.max_ratio = std::max(agg.max_ratio, run.report.max_ratio);

    const std::size_t first = window == 0 ? 0 : 1;
    for (std::size_t j = first; j < run.times.size(); ++j) {
      SpectralTri st = node_state(run.path, j, g, false);
      const int global = done + static_cast<int>(j);
      out.energy_ledger.push_back(lifted_energy_sample(st, global * g.dt, params));
      if (global % cfg.store_every == 0 || global == total)
        store(st, node_state(run.path, j, g, true), global * g.dt);
    }
    v = node_state(run.path, run.times.size() - 1, g, false);
    done += steps;
    ++window;
  }
  agg.windows = window;
  if (report) *report = std::move(agg);
  return out;
}

std::vector<double> deriv_residual(const SpectralTrajectory& traj, const PhysParams& params) {
  if (traj.derivs.size() != traj.states.size())
    throw StateError("deriv_residual: trajectory has no stored derivatives");
  std::vector<double> r(traj.states.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    SpectralTri res = axpy(1.0, apply_l_power(traj.states[j], 1.0, params), traj.derivs[j]);
    res = axpy(-1.0, assemble_f(traj.states[j], traj.derivs[j], params), res);
    r[j] = spectral_norm(res);
  }
  return r;
}

SpectralTrajectory to_spectral(const Trajectory& traj) {
  traj.check();
  SpectralTrajectory s;
  if (traj.empty()) return s;
  s.grid = traj.states.front().grid;
  s.times = traj.times;
  for (const TriField& f : traj.states) s.states.push_back(to_spectral(f));
  for (const TriField& f : traj.derivs) s.derivs.push_back(to_spectral(f));
  return s;
}

Trajectory from_spectral(const SpectralTrajectory& traj, int store_every) {
  if (store_every < 1) throw ConfigError("store_every must be >= 1");
  Trajectory t;
  const std::size_t n = traj.states.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (j % store_every != 0 && j + 1 != n) continue;
    t.times.push_back(traj.times[j]);
    t.states.push_back(from_spectral(traj.states[j]));
    if (j < traj.derivs.size()) t.derivs.push_back(from_spectral(traj.derivs[j]));
  }
  return t;
}

}  // namespace triphase
