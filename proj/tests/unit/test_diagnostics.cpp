#include <doctest.h>

#include <cmath>

#include "helpers.hpp"

using namespace triphase;

namespace {

// θ_A = e^{-λt} sin(k_1 z) cos(2πy/l_h), θ_B = θ_S = 0, sampled on a fine time grid.
std::vector<EnergySample> decaying_mode(const GridSpec& g, const PhysParams& p, double T, int N) {
  TriField base = TriField::zeros(g);
  base.trace_a.assign(g.surf_size(), 0.0);
  base.trace_b.assign(g.surf_size(), 0.0);
  for (int i = 0; i < g.n_h; ++i)
    for (int j = 0; j < g.n_h; ++j)
      for (int n = 0; n < g.n_z; ++n)
        base.f_a[base.bulk_index(i, j, n)] =
            std::cos(2 * std::numbers::pi * j / g.n_h) * std::sin(g.kz(0) * g.z(n));
  const double q = std::pow(2 * std::numbers::pi / g.l_h, 2);
  const double lam = p.kappa_a * (q + g.kz(0) * g.kz(0));
  const EnergySample e0 = energy_sample(base, 0.0, p);
  std::vector<EnergySample> s;
  for (int k = 0; k <= N; ++k) {
    const double t = T * k / N, f = std::exp(-2 * lam * t);
    EnergySample e = e0;
    e.t = t;
    e.bulk_a *= f;
    e.diss_a *= f;
    s.push_back(e);
  }
  return s;
}

}  // namespace

TEST_CASE("energy ledger of a decoupled decaying mode is exact up to time quadrature") {
  GridSpec g = th::small_grid(8, 8);
  PhysParams p;
  EnergyLedger led = energy_ledger(decaying_mode(g, p, 0.1, 20000));
  CHECK(led.max_defect <= 1e-10);
  CHECK(led.max_increase == 0.0);
  const Table t = led.table();
  CHECK(t.rows.size() == 20001);
  CHECK(t.header.size() == t.rows.front().size());
}

TEST_CASE("ledger defect falls as dt² on a coupled run") {
  GridSpec g = th::small_grid(16, 16);
  PhysParams p;
  SolverConfig cfg;
  const TriField th0 = gaussian_bump().sample(g);
  std::vector<double> d;
  for (double dt : {4e-3, 2e-3}) {
    TriField s = th0;
    s.grid.dt = dt;
    d.push_back(energy_ledger(solve_global(s, 0.2, cfg, p), p).max_defect);
  }
  CHECK(d[0] / d[1] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("zero trajectory and the zero-energy convention") {
  GridSpec g = th::small_grid();
  PhysParams p;
  Trajectory tr;
  tr.times = {0.0, 0.1};
  tr.states = {TriField::zeros(g), TriField::zeros(g)};
  EnergyLedger led = energy_ledger(tr, p);
  CHECK(led.max_defect == 0.0);
  CHECK(led.total[1] == 0.0);
}

TEST_CASE("trace gap: lifted run, injected mismatch, oracle run") {
  GridSpec g = th::small_grid(16, 16);
  g.dt = 1e-3;
  PhysParams p;
  SolverConfig cfg;
  Trajectory tr = solve_global(gaussian_bump().sample(g), 0.01, cfg, p);
  CHECK(trace_gap(tr).max() <= 1e-12);

  Trajectory bad;
  bad.times = {0.0};
  TriField s = gaussian_bump().sample(g);
  for (double& x : s.trace_a) x += 0.01;
  bad.states = {s};
  const TraceGapReport r = trace_gap(bad);
  CHECK(r.max_gap_a == doctest::Approx(0.01 * g.l_h).epsilon(1e-12));
  CHECK(r.max_gap_b < 1e-15);

  oracle::OracleOptions opt;
  opt.sample_dt = 0.005;
  Trajectory orc = oracle::oracle_solve(gaussian_bump(), g, 0.01, p, 1, opt);
  // Quadratic extrapolation from the interior nodes: O(Δz²) on the oracle profile.
  CHECK(trace_gap(orc, false).max() <= 10 * g.dz() * g.dz());
}

TEST_CASE("initial continuity fit recovers a manufactured exponent") {
  GridSpec g = th::small_grid();
  TriField th0 = th::random_field(g, 1), phi = th::random_field(g, 2);
  Trajectory tr;
  for (double t : {0.0, 0.001, 0.002, 0.004, 0.008}) {
    tr.times.push_back(t);
    tr.states.push_back(axpy(0.3 * std::sqrt(t), phi, th0));
  }
  ContinuityReport r = initial_continuity(tr, th0, 3);
  CHECK(r.exponent == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r.constant == doctest::Approx(0.3 * h_norm(phi)).epsilon(1e-10));
  ContinuityReport at = initial_continuity(tr, th0, 0, {0.002, 0.008});
  CHECK(at.t.size() == 2);
  CHECK_THROWS_AS(initial_continuity(tr, th0, 0, {0.003}), StateError);
}

TEST_CASE("Holder probe: zero trajectory and bad exponent") {
  GridSpec g = th::small_grid();
  PhysParams p;
  Trajectory tr;
  for (int k = 0; k <= 8; ++k) {
    tr.times.push_back(0.01 * k);
    tr.states.push_back(TriField::zeros(g));
  }
  CHECK(holder_probe(tr, p, 0.5, 0.0, 0.08).max_ratio == 0.0);
  CHECK_THROWS_AS(holder_probe(tr, p, 1.5, 0.0, 0.08), DomainError);
}

TEST_CASE("Holder probe on a solver run stays bounded") {
  GridSpec g = th::small_grid(16, 16);
  PhysParams p;
  SolverConfig cfg;
  Trajectory tr = solve_global(gaussian_bump().sample(g), 0.064, cfg, p);
  HolderReport h = holder_probe(tr, p, 0.5, 0.016, 0.064);
  CHECK(std::isfinite(h.max_ratio));
  CHECK(h.max_ratio > 0);
  CHECK(!h.table.rows.empty());
}

TEST_CASE("resample_theta on the same grid is the identity") {
  GridSpec g = th::small_grid(16, 16);
  PhysParams p;
  TriField th0 = gaussian_bump().sample(g);
  TriField r = resample_theta(th0, g, p);
  CHECK(th::max_abs_diff(r.f_a, th0.f_a) < 1e-13);
  CHECK(th::max_abs_diff(r.f_s, th0.f_s) < 1e-13);
  CHECK_THROWS_AS(resample_theta(th0, th::small_grid(8, 8), p), ConfigError);
}

TEST_CASE("resampled smooth data approaches the analytic samples") {
  GridSpec g = th::small_grid(16, 31);
  PhysParams p;
  const InitialData d = gaussian_bump();
  const GridSpec fine = g.refined(2);
  const double e = h_norm(resample_theta(d.sample(g), fine, p) - d.sample(fine));
  CHECK(e < 2e-2 * h_norm(d.sample(fine)));
}
