#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

#include "artifacts.hpp"
#include "triphase/beta_lift.hpp"
#include "triphase/diagnostics.hpp"
#include "triphase/picard.hpp"
#include "triphase/spectral.hpp"
#include "triphase/table.hpp"
#include "triphase/variational.hpp"

namespace triphase::cli {

namespace {

Check make(std::string name, double measured, double limit, std::string note = {}) {
  return {std::move(name), measured, limit, measured <= limit, std::move(note)};
}

Check skipped(std::string name, std::string why) {
  return {std::move(name), std::nan(""), std::nan(""), true, "skipped: " + why};
}

TriField random_field(const GridSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TriField f = TriField::zeros(g);
  for (double& x : f.f_a) x = u(rng);
  for (double& x : f.f_b) x = u(rng);
  for (double& x : f.f_s) x = u(rng);
  return f;
}

SpectralTri random_spectral(const GridSpec& g, std::mt19937_64& rng) {
  return to_spectral(random_field(g, rng));
}

template <class F>
void for_each_coeff(const SpectralTri& a, const SpectralTri& b, F&& f) {
  for (std::size_t k = 0; k < a.c_a.size(); ++k) f(a.c_a[k], b.c_a[k]);
  for (std::size_t k = 0; k < a.c_b.size(); ++k) f(a.c_b[k], b.c_b[k]);
  for (std::size_t k = 0; k < a.c_s.size(); ++k) f(a.c_s[k], b.c_s[k]);
}

double rel_diff(const SpectralTri& a, const SpectralTri& b) {
  const double s = spectral_norm(a);
  const double d = spectral_norm(axpy(-1.0, b, a));
  return s > 0 ? d / s : d;
}

// Composite Simpson on uniform nodes (even number of intervals).
double simpson(const std::vector<double>& f, double h) {
  double acc = f.front() + f.back();
  for (std::size_t k = 1; k + 1 < f.size(); ++k) acc += (k % 2 ? 4.0 : 2.0) * f[k];
  return acc * h / 3.0;
}

// sup over x > 0 of f by a log-spaced scan refined with golden sections.
template <class F>
double scan_sup(F&& f, double lo, double hi) {
  const int n = 200000;
  const double r = std::log(hi / lo) / n;
  int best = 0;
  double bv = -1;
  for (int k = 0; k <= n; ++k) {
    const double v = f(lo * std::exp(r * k));
    if (v > bv) bv = v, best = k;
  }
  double a = lo * std::exp(r * std::max(0, best - 1)), b = lo * std::exp(r * std::min(n, best + 1));
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
    const double c = b - gr * (b - a), d = a + gr * (b - a);
    if (f(c) > f(d)) b = d;
    else a = c;
  }
  return std::max(bv, f(0.5 * (a + b)));
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

bool same_trajectory(const Trajectory& a, const Trajectory& b) {
  if (!bitwise_equal(a.times, b.times) || a.states.size() != b.states.size()) return false;
  for (std::size_t j = 0; j < a.states.size(); ++j) {
    const TriField &x = a.states[j], &y = b.states[j];
    if (!bitwise_equal(x.f_a, y.f_a) || !bitwise_equal(x.f_b, y.f_b) ||
        !bitwise_equal(x.f_s, y.f_s))
      return false;
  }
  if (a.energy_ledger.size() != b.energy_ledger.size()) return false;
  for (std::size_t j = 0; j < a.energy_ledger.size(); ++j)
    if (std::memcmp(&a.energy_ledger[j], &b.energy_ledger[j], sizeof(EnergySample)) != 0)
      return false;
  return true;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

std::vector<Check> operator_checks(const RunConfig& cfg) {
  const GridSpec& g = cfg.grid;
  const PhysParams& p = cfg.phys;
  std::mt19937_64 rng(cfg.scenario.seed);
  std::vector<Check> out;

  const SpectralTri c = random_spectral(g, rng);
  {
    const SpectralTri id = apply_semigroup(c, 0.0, p);
    double m = 0;
    for_each_coeff(c, id, [&](cplx x, cplx y) { m = std::max(m, std::abs(x - y)); });
    out.push_back(make("semigroup_identity_t0", m, 0.0));
  }
  {
    const SpectralTri one = apply_semigroup(c, 1.0, p);
    const SpectralTri two = apply_semigroup(apply_semigroup(c, 0.7, p), 0.3, p);
    out.push_back(make("semigroup_composition", rel_diff(one, two), 1e-13));
  }
  {
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    double worst = -1;
    for (int k = 0; k < 100; ++k) {
      const SpectralTri x = random_spectral(g, rng);
      const double t = k == 0 ? 0.0 : ut(rng);
      worst = std::max(worst, spectral_norm(apply_semigroup(x, t, p)) / spectral_norm(x) - 1.0);
    }
    out.push_back(make("semigroup_contraction", worst, 1e-14, "max of |S(t)c|/|c| - 1 over 100 states"));
  }
  {
    double worst = 0;
    for (double t : {0.01, 0.1, 1.0}) {
      const SpectralTri lhs = apply_l_power(apply_semigroup(c, t, p), 1.0, p);
      const SpectralTri rhs =
          apply_l_power(apply_semigroup(apply_l_power(c, 0.5, p), t, p), 0.5, p);
      for_each_coeff(lhs, rhs, [&](cplx x, cplx y) {
        const double d = std::abs(x - y);
        worst = std::max(worst, std::abs(x) > 0 ? d / std::abs(x) : d);
      });
    }
    out.push_back(make("commutation_identity_per_mode", worst, 1e-12));
  }
  {
    // W(t) = e^{-tL}V0 on smooth data; the factor 2 on the dissipation is exact per mode.
    const SpectralTri v0 = apply_semigroup(c, 0.05, p);
    const double T = 0.1;
    const int n = 400;
    std::vector<double> d(n + 1);
    for (int k = 0; k <= n; ++k) {
      const SpectralTri w = apply_semigroup(v0, T * k / n, p);
      d[k] = std::pow(spectral_norm(apply_l_power(w, 0.5, p)), 2);
    }
    const double e0 = std::pow(spectral_norm(v0), 2);
    const double eT = std::pow(spectral_norm(apply_semigroup(v0, T, p)), 2);
    const double diss = simpson(d, T / n);
    const double defect = std::abs(eT + 2 * diss - e0) / e0;
    const double without = std::abs(eT + diss - e0) / e0;
    std::ostringstream note;
    note << "same identity without the factor 2 leaves defect " << format_double(without);
    out.push_back(make("energy_identity_factor_two", defect, 1e-8, note.str()));
  }
  {
    double worst = 0;
    for (double q : {0.25, 0.5, 1.0})
      for (double t : {0.1, 1.0}) {
        const double sup = scan_sup([&](double lam) { return std::pow(lam, q) * std::exp(-t * lam); },
                                    1e-6 / t, 1e4 / t);
        const double closed = std::pow(q / (std::numbers::e * t), q);
        worst = std::max(worst, std::abs(sup - closed) / closed);
      }
    out.push_back(make("smoothing_sup_closed_form", worst, 1e-6));
  }
  {
    double worst = 0;
    for (double q : {0.25, 0.5, 1.0})
      worst = std::max(worst, scan_sup([&](double x) { return -std::expm1(-x) / std::pow(x, q); },
                                       1e-8, 1e4));
    out.push_back(make("approximation_sup_at_most_one", worst, 1.0));
  }
  {
    PhysParams unit = p;
    unit.kappa_s_tilde = 1.0;
    const double v = eval_kernel_surface({0.0, 0.0}, 1.0, unit);
    out.push_back(make("surface_kernel_origin", std::abs(4 * std::numbers::pi * v - 1.0), 1e-15));
  }
  {
    std::uniform_real_distribution<double> ub(0.5, 4.0);
    double worst = -1;
    for (int k = 0; k < 100; ++k) {
      PhysParams q = p;
      q.beta = ub(rng);
      TriField f = random_field(g, rng);
      double n2 = 0;
      for (double x : f.f_s) n2 += x * x;
      const double fs = std::sqrt(n2) * g.dx();
      for (Side side : {Side::Upper, Side::Lower}) {
        const double w = weighted_surface_norm(f.f_s, g, q, side);
        worst = std::max(worst, w / (fs / std::sqrt(2 * q.beta)) - 1.0);
      }
    }
    out.push_back(make("weighted_surface_norm_bound", worst, 1e-12, "max relative excess over 1/sqrt(2 beta)"));
  }
  {
    PhysParams q = p;
    q.beta = 2.0;
    std::vector<double> fs(g.surf_size(), 0.0);
    fs[0] = 1.0 / g.dx();  // unit L2 norm under the midpoint rule
    const double w = weighted_surface_norm(fs, g, q, Side::Upper);
    const double slack = 0.5 * std::exp(-4 * g.l_z) + 1e-12;
    out.push_back(make("weighted_surface_norm_tensor_beta2", std::abs(w - 0.5), slack));
  }
  {
    const SpectralTri v = random_spectral(g, rng), dv = random_spectral(g, rng);
    const SpectralTri w = random_spectral(g, rng), dw = random_spectral(g, rng);
    const double a = 0.7, b = -1.3;
    const SpectralTri z = SpectralTri::zeros(g);
    const SpectralTri lhs =
        assemble_f(axpy(a, v, axpy(b, w, z)), axpy(a, dv, axpy(b, dw, z)), p);
    const SpectralTri rhs = axpy(a, assemble_f(v, dv, p), axpy(b, assemble_f(w, dw, p), z));
    out.push_back(make("assemble_f_linearity", rel_diff(lhs, rhs), 1e-12));
  }
  {
    const TriField th = scenario_state(cfg);
    double gap = 0;
    if (th.has_traces())
      for (std::size_t k = 0; k < th.f_s.size(); ++k)
        gap = std::max({gap, std::abs(th.trace_a[k] - th.f_s[k]), std::abs(th.trace_b[k] - th.f_s[k])});
    const TriField u = lift_to_u(th, p);
    const TriField back = lower_to_theta(u, p);
    double scale = 1.0;
    for (double x : th.f_a) scale = std::max(scale, std::abs(x));
    const double rt = std::max({max_abs_diff(back.f_a, th.f_a), max_abs_diff(back.f_b, th.f_b),
                                max_abs_diff(back.f_s, th.f_s)});
    out.push_back(make("lift_round_trip", rt, 1e-14 * scale));
    double tr = 0;
    for (std::size_t k = 0; k < u.trace_a.size(); ++k)
      tr = std::max({tr, std::abs(u.trace_a[k]), std::abs(u.trace_b[k])});
    out.push_back(make("lift_zero_trace", tr, gap + 1e-12));
  }
  return out;
}

std::vector<Check> constants_checks(const ConstantsReport& c) {
  // Zero-data maximal regularity for a nonnegative self-adjoint generator:
  // the per-mode ratio is at most 2; the slack covers time quadrature.
  const double slack = 0.05;
  std::vector<Check> out;
  out.push_back(make("max_regularity_k_a", c.k_a, 2.0 + slack));
  out.push_back(make("max_regularity_k_b", c.k_b, 2.0 + slack));
  out.push_back(make("max_regularity_k_s", c.k_s, 2.0 + slack));
  return out;
}

std::vector<Check> solver_checks(const RunConfig& cfg, const ConstantsReport& constants) {
  const PhysParams& p = cfg.phys;
  const GridSpec& g = cfg.grid;
  std::vector<Check> out;
  const TriField th0 = scenario_state(cfg);

  SolverReport rep;
  const Trajectory traj = solve_global(th0, g.t_end, cfg.solver, p, &rep);
  const EnergyLedger led = energy_ledger(traj, p);
  const double e0 = led.samples.empty() ? 0.0 : led.samples.front().energy();
  out.push_back(make("energy_ledger_defect", led.max_defect, 1e-6));
  out.push_back(make("energy_monotone_increase", led.max_increase, 1e-12 * std::max(e0, 1e-300)));
  out.push_back(make("trace_gap", trace_gap(traj).max(), 1e-10));
  out.push_back(make("heat_balance_residual", heat_balance_residual(traj, p).max(), 1e-8));
  out.push_back(make("picard_converged", rep.converged ? 0.0 : 1.0, 0.0));
  double excess = -1e300;
  for (const PicardRow& r : rep.rows) excess = std::max(excess, r.xt_norm - r.apriori);
  out.push_back(make("apriori_bound_excess", rep.rows.empty() ? 0.0 : excess, 1e-8));

  // One window from the lifted data, two different starting iterates.
  const SpectralTri v0 = to_spectral(lift_to_u(th0, p));
  PicardOptions hom, frz;
  hom.constants = &constants;
  frz.start = PicardStart::Frozen;
  const WindowResult a = picard_window(v0, cfg.solver, p, hom);
  const WindowResult b = picard_window(v0, cfg.solver, p, frz);
  const bool hyp = p.alpha_s > constants.alpha_0 && p.beta > constants.beta_0;
  if (hyp) {
    out.push_back(make("picard_contraction_ratio", a.report.max_ratio,
                       cfg.solver.contraction_target + 0.05));
  } else {
    std::ostringstream why;
    why << "hypotheses not met (alpha_s " << format_double(p.alpha_s) << " vs alpha_0 "
        << format_double(constants.alpha_0) << ", beta " << format_double(p.beta)
        << " vs beta_0 " << format_double(constants.beta_0) << "); measured max ratio "
        << format_double(a.report.max_ratio);
    out.push_back(skipped("picard_contraction_ratio", why.str()));
  }
  SpectralTrajectory d;
  d.grid = a.path.grid;
  d.times = a.path.times;
  for (std::size_t j = 0; j < a.path.states.size(); ++j) {
    d.states.push_back(axpy(-1.0, b.path.states[j], a.path.states[j]));
    d.derivs.push_back(axpy(-1.0, b.path.derivs[j], a.path.derivs[j]));
  }
  out.push_back(make("uniqueness_alternative_start", xt_norm(d, p), 10 * cfg.solver.picard_tol));

  const Trajectory again = solve_global(th0, g.t_end, cfg.solver, p);
  out.push_back(make("determinism_duplicate_run", same_trajectory(traj, again) ? 0.0 : 1.0, 0.0,
                     "bitwise comparison of states and ledger"));
  return out;
}

std::vector<Check> variational_checks(const RunConfig& cfg) {
  const PhysParams& p = cfg.phys;
  const GridSpec& g = cfg.grid;
  std::vector<Check> out;
  const TriField theta = gaussian_bump(1.0, 1.2, 1.0, 0.3, -0.2).sample(g);
  const TriField phi = gaussian_bump(0.5, 1.5, 0.8, -0.6, 0.4).sample(g);
  const std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  const GateauxReport con = gateaux_check(theta, phi, p, eps);
  out.push_back(make("gateaux_constrained_defect", con.max_defect, 1e-6));

  // Break the constraint: shift the bulk traces of φ away from φ_S.
  TriField free = phi;
  const TriField bump = gaussian_bump(0.3, 1.0, 0.5).sample(g);
  for (std::size_t k = 0; k < free.f_a.size(); ++k) free.f_a[k] += bump.f_a[k];
  for (std::size_t k = 0; k < free.trace_a.size(); ++k) free.trace_a[k] += bump.trace_a[k];
  const GateauxReport unc = gateaux_unconstrained(theta, free, p, eps);
  std::ostringstream note;
  note << "boundary term " << format_double(unc.boundary_term);
  out.push_back(make("gateaux_unconstrained_boundary_term", unc.max_defect, 1e-6, note.str()));
  return out;
}

std::string checks_csv(const std::vector<Check>& checks) {
  std::string s = "check,measured,limit,pass,note\r\n";
  for (const Check& c : checks)
    s += csv_escape(c.name) + "," + format_double(c.measured) + "," + format_double(c.limit) + "," +
         (c.pass ? "1" : "0") + "," + csv_escape(c.note) + "\r\n";
  return s;
}

}  // namespace triphase::cli
