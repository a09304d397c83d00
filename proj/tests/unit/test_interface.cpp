#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"

using namespace triphase;

TEST_CASE("sine traces vanish and extrapolation is exact for quadratics") {
  GridSpec g = th::small_grid(8, 10);
  TriField f = th::random_field(g, 1);
  CHECK(th::max_abs(trace_plus(g, f.f_a, TraceMethod::Sine)) < 1e-15);
  CHECK(th::max_abs(trace_minus(g, f.f_b, TraceMethod::Sine)) < 1e-15);
  for (int c = 0; c < static_cast<int>(g.surf_size()); ++c)
    for (int n = 0; n < g.n_z; ++n) {
      const double z = g.z(n);
      f.f_a[c * g.n_z + n] = 1.0 + c + 2 * z - 3 * z * z;
      f.f_b[c * g.n_z + n] = -2.0 + 0.5 * z * z;
    }
  auto ta = trace_plus(g, f.f_a, TraceMethod::Extrapolate);
  auto tb = trace_minus(g, f.f_b, TraceMethod::Extrapolate);
  for (std::size_t c = 0; c < ta.size(); ++c) {
    CHECK(ta[c] == doctest::Approx(1.0 + c).epsilon(1e-12));
    CHECK(tb[c] == doctest::Approx(-2.0).epsilon(1e-12));
  }
}

TEST_CASE("normal derivative traces of the first sine mode") {
  GridSpec g = th::small_grid(8, 16);
  TriField f = TriField::zeros(g);
  for (std::size_t c = 0; c < g.surf_size(); ++c)
    for (int n = 0; n < g.n_z; ++n) {
      f.f_a[c * g.n_z + n] = std::sin(g.kz(0) * g.z(n));
      f.f_b[c * g.n_z + n] = std::sin(g.kz(0) * g.z(n));
    }
  auto da = trace_normal_deriv_plus(g, f.f_a);
  auto db = trace_normal_deriv_minus(g, f.f_b);
  // The lower slab is mirrored, so ∂3 in x3 orientation flips sign.
  for (std::size_t c = 0; c < da.size(); ++c) {
    CHECK(da[c] == doctest::Approx(g.kz(0)).epsilon(1e-12));
    CHECK(db[c] == doctest::Approx(-g.kz(0)).epsilon(1e-12));
  }
}

TEST_CASE("assemble_f: zero state, surface mode, single flux term") {
  GridSpec g = th::small_grid(8, 16);
  PhysParams p;
  p.kappa_a = 1.3;
  p.kappa_b = 0.7;
  p.kappa_s_tilde = 0.9;
  const LiftProfile& lp = lift_profile(p.beta, g);
  SpectralTri z = SpectralTri::zeros(g);
  SpectralTri f0 = assemble_f(z, z, p);
  CHECK(spectral_norm(f0) == 0.0);

  // v_S = single horizontal mode, dv_S/dt = -κ̃_S|ξ|² v_S.
  const std::size_t m = 0 * g.n_hc() + 1;
  const double q = hmodes(g)[m].q, b2 = p.beta * p.beta;
  SpectralTri v = SpectralTri::zeros(g), dv = SpectralTri::zeros(g);
  v.c_s[m] = cplx(0.4, 0.2);
  dv.c_s[m] = -p.kappa_s_tilde * q * v.c_s[m];
  SpectralTri f = assemble_f(v, dv, p);
  for (int n = 0; n < g.n_z; ++n) {
    const cplx ea = (p.kappa_s_tilde * q - p.kappa_a * q + b2 * p.kappa_a) * v.c_s[m] * lp.P[n];
    const cplx eb = (p.kappa_s_tilde * q - p.kappa_b * q + b2 * p.kappa_b) * v.c_s[m] * lp.P[n];
    CHECK(std::abs(f.c_a[m * g.n_z + n] - ea) < 1e-14);
    CHECK(std::abs(f.c_b[m * g.n_z + n] - eb) < 1e-14);
  }

  // v_A = sin(k_1 z) e^{iξ·x}: F₃ = (κ_A/α_S) g_1, with g_1 = k_1(1 + e^{-βl_z}) → k_1.
  SpectralTri w = SpectralTri::zeros(g);
  w.c_a[m * g.n_z + 0] = 1.0;
  SpectralTri fw = assemble_f(w, SpectralTri::zeros(g), p);
  CHECK(std::abs(fw.c_s[m] - p.kappa_a / p.alpha_s * lp.g[0]) < 1e-15);
  CHECK(std::abs(fw.c_s[m].real() - p.kappa_a / p.alpha_s * g.kz(0)) <=
        p.kappa_a / p.alpha_s * g.kz(0) * std::exp(-p.beta * g.l_z) * (1 + 1e-12));
  CHECK(std::abs(fw.c_a[m * g.n_z]) == 0.0);
}

TEST_CASE("assemble_f is linear") {
  GridSpec g = th::small_grid(8, 8);
  PhysParams p;
  SpectralTri v = th::random_spectral(g, 1), dv = th::random_spectral(g, 2);
  SpectralTri w = th::random_spectral(g, 3), dw = th::random_spectral(g, 4);
  SpectralTri z = SpectralTri::zeros(g);
  const double a = 1.7, b = -0.4;
  SpectralTri lhs = assemble_f(axpy(a, v, axpy(b, w, z)), axpy(a, dv, axpy(b, dw, z)), p);
  SpectralTri rhs = axpy(a, assemble_f(v, dv, p), axpy(b, assemble_f(w, dw, p), z));
  CHECK(spectral_norm(axpy(-1.0, lhs, rhs)) <= 1e-12 * spectral_norm(rhs));
}

TEST_CASE("trajectory assemble_f needs stored derivatives") {
  GridSpec g = th::small_grid();
  PhysParams p;
  Trajectory tr;
  tr.times = {0.0};
  tr.states = {TriField::zeros(g)};
  CHECK_THROWS_AS(assemble_f(tr, 0, p), StateError);
  tr.derivs = tr.states;
  TriField f = assemble_f(tr, 0, p);
  CHECK(th::max_abs(f.f_a) == 0.0);
  CHECK(th::max_abs(f.f_s) == 0.0);
}

TEST_CASE("threshold formulas") {
  PhysParams p;
  ConstantsReport r;
  r.c_star = 0.2;
  r.k_a = 1.1;
  r.k_b = 1.2;
  r.k_s = 1.3;
  derive_thresholds(r, p);
  CHECK(r.alpha_0 == doctest::Approx(8 * 0.2 * 1.3));
  const double kk = 1.1 * (1 + p.kappa_a / p.kappa_s_tilde) + 1.2 * (1 + p.kappa_b / p.kappa_s_tilde);
  CHECK(r.beta_0 == doctest::Approx(64 * 0.04 * kk * kk));
  CHECK(r.t_star == doctest::Approx(std::min(1.0, std::pow(1 / (4 * r.c_star_big), 2))));
  r.c_star = 0;
  derive_thresholds(r, p);
  CHECK(r.t_star == 1.0);
}

TEST_CASE("estimate_constants: precondition, K bound, reproducibility") {
  GridSpec g = th::small_grid(8, 8);
  PhysParams p;
  CHECK_THROWS_AS(estimate_constants(g, p, 0), DomainError);
  ConstantsReport a = estimate_constants(g, p, 4);
  ConstantsReport b = estimate_constants(g, p, 4);
  CHECK(a.to_kv() == b.to_kv());
  CHECK(a.trials == 4);
  // Zero-data maximal regularity of a nonnegative self-adjoint generator is at most 2.
  for (double k : {a.k_a, a.k_b, a.k_s}) {
    CHECK(k > 0);
    CHECK(k <= 2.0 + 0.05);
  }
  CHECK(a.c_star > 0);
  CHECK(a.to_kv().find("beta_0 = ") != std::string::npos);
}

TEST_CASE("scalar maximal regularity ratio is at most 2") {
  // y' = -λy + f, y(0) = 0, ETD with piecewise-linear f: ‖y'‖ + ‖λy‖ ≤ 2‖f‖.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ul(-3.0, 3.0);
  const int N = 2000;
  const double T = 0.5, dt = T / N;
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double lam = std::pow(10.0, ul(rng));
    const double w1 = u(rng) * 20, w2 = u(rng) * 20, ph = u(rng) * 3;
    std::vector<double> f(N + 1), y(N + 1, 0.0), t(N + 1);
    for (int j = 0; j <= N; ++j) t[j] = j * dt, f[j] = std::cos(w1 * t[j] + ph) + 0.5 * std::sin(w2 * t[j]);
    const EtdWeights w = etd_weights(lam, dt);
    for (int j = 0; j < N; ++j) y[j + 1] = w.e * y[j] + w.w0 * f[j] + w.w1 * (f[j + 1] - f[j]);
    std::vector<double> d2(N + 1), l2(N + 1), f2(N + 1);
    for (int j = 0; j <= N; ++j) {
      const double d = -lam * y[j] + f[j];
      d2[j] = d * d, l2[j] = lam * lam * y[j] * y[j], f2[j] = f[j] * f[j];
    }
    const double ratio = (std::sqrt(trapezoid(t, d2)) + std::sqrt(trapezoid(t, l2))) / std::sqrt(trapezoid(t, f2));
    worst = std::max(worst, ratio);
  }
  CHECK(worst <= 2.0 + 1e-3);
}
