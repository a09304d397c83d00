#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"

using namespace triphase;

namespace {

TriField compatible_random(const GridSpec& g, const PhysParams& p, std::uint64_t seed) {
  TriField t = th::random_field(g, seed);
  return project_compatible(t, p);
}

}  // namespace

TEST_CASE("pure lift profile lifts to zero bulk") {
  GridSpec g = th::small_grid(16, 16);
  PhysParams p;
  TriField th0 = pure_lift(p.beta, 1.3, 1.1).sample(g);
  TriField u = lift_to_u(th0, p);
  CHECK(th::max_abs(u.f_a) < 1e-15);
  CHECK(th::max_abs(u.f_b) < 1e-15);
  CHECK(th::max_abs_diff(u.f_s, th0.f_s) == 0.0);
}

TEST_CASE("zero surface field leaves bulk fields unchanged") {
  GridSpec g = th::small_grid();
  PhysParams p;
  TriField th0 = th::random_field(g, 8);
  std::fill(th0.f_s.begin(), th0.f_s.end(), 0.0);
  th0.trace_a.assign(g.surf_size(), 0.0);
  th0.trace_b.assign(g.surf_size(), 0.0);
  TriField u = lift_to_u(th0, p);
  CHECK(u.f_a == th0.f_a);
  CHECK(u.f_b == th0.f_b);
}

TEST_CASE("lift and lower are mutually inverse") {
  GridSpec g = th::small_grid(8, 12);
  PhysParams p;
  p.beta = 1.4;
  TriField th0 = compatible_random(g, p, 21);
  TriField back = lower_to_theta(lift_to_u(th0, p), p);
  CHECK(th::max_abs_diff(back.f_a, th0.f_a) < 1e-14);
  CHECK(th::max_abs_diff(back.f_b, th0.f_b) < 1e-14);
  CHECK(th::max_abs_diff(back.f_s, th0.f_s) == 0.0);

  TriField u0 = th::random_field(g, 22);
  TriField again = lift_to_u(lower_to_theta(u0, p), p);
  CHECK(th::max_abs_diff(again.f_a, u0.f_a) < 1e-14);
  CHECK(th::max_abs_diff(again.f_b, u0.f_b) < 1e-14);
}

TEST_CASE("lifted compatible data has zero interface trace") {
  GridSpec g = th::small_grid();
  PhysParams p;
  TriField u = lift_to_u(compatible_random(g, p, 5), p);
  REQUIRE(u.has_traces());
  CHECK(th::max_abs(u.trace_a) <= 1e-12);
  CHECK(th::max_abs(u.trace_b) <= 1e-12);
}

TEST_CASE("incompatible traces are rejected with the measured gap") {
  GridSpec g = th::small_grid();
  PhysParams p;
  TriField t = compatible_random(g, p, 6);
  t.trace_a[3] += 0.25;
  try {
    lift_to_u(t, p);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(e.measured() == doctest::Approx(0.25));
  }
}

TEST_CASE("project_compatible matches traces to the surface field") {
  GridSpec g = th::small_grid();
  PhysParams p;
  TriField t = th::random_field(g, 12);
  TriField c = project_compatible(t, p);
  CHECK(th::max_abs_diff(c.trace_a, c.f_s) == 0.0);
  CHECK_NOTHROW(lift_to_u(c, p));
}

TEST_CASE("weighted surface norm: tensor equality, zero, random bound") {
  GridSpec g = th::small_grid(16, 8);
  PhysParams p;
  p.beta = 2.0;
  std::vector<double> fs(g.surf_size(), 0.0);
  fs[5] = 1.0 / g.dx();  // unit L2 norm
  // Half-line value 1/sqrt(2β) = 0.5, reached up to the slab truncation e^{-4 l_z}.
  CHECK(std::abs(weighted_surface_norm(fs, g, p, Side::Upper) - 0.5) <= std::exp(-4 * g.l_z) + 1e-15);
  CHECK(weighted_surface_norm(fs, g, p, Side::Lower) == weighted_surface_norm(fs, g, p, Side::Upper));

  std::vector<double> zero(g.surf_size(), 0.0);
  CHECK(weighted_surface_norm(zero, g, p, Side::Upper) == 0.0);

  p.beta = 1.0;
  TriField r = th::random_field(g, 77);
  double n2 = 0;
  for (double x : r.f_s) n2 += x * x;
  const double norm = std::sqrt(n2) * g.dx();
  CHECK(weighted_surface_norm(r.f_s, g, p, Side::Upper) <= norm / std::sqrt(2.0) + 1e-14);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ub(0.1, 5.0);
  for (int k = 0; k < 100; ++k) {
    p.beta = ub(rng);
    TriField f = th::random_field(g, 200 + k);
    double s = 0;
    for (double x : f.f_s) s += x * x;
    CHECK(weighted_surface_norm(f.f_s, g, p, Side::Upper) <= std::sqrt(s) * g.dx() / std::sqrt(2 * p.beta) * (1 + 1e-14));
  }
  p.beta = -1;
  CHECK_THROWS_AS(weighted_surface_norm(fs, g, p, Side::Upper), DomainError);
}

TEST_CASE("lift profile projections are the analytic integrals") {
  GridSpec g = th::small_grid(8, 24);
  const double beta = 1.5;
  const LiftProfile& lp = lift_profile(beta, g);
  CHECK(&lp == &lift_profile(beta, g));
  const double ebl = std::exp(-beta * g.l_z);
  CHECK(lp.m == doctest::Approx((1 - ebl * ebl) / (2 * beta)).epsilon(1e-15));
  for (int n = 0; n < g.n_z; ++n) {
    const double k = g.kz(n);
    const double gn = k * (1 - std::pow(-1.0, n + 1) * ebl);
    CHECK(lp.g[n] == doctest::Approx(gn).epsilon(1e-15));
    // Midpoint quadrature of ∫ e^{-βz} sin(kz) dz on a fine grid.
    const int M = 200000;
    double q = 0;
    for (int i = 0; i < M; ++i) {
      const double z = (i + 0.5) * g.l_z / M;
      q += std::exp(-beta * z) * std::sin(k * z);
    }
    q *= g.l_z / M;
    CHECK(std::abs(lp.ip[n] - q) < 1e-9);
  }
  CHECK(lp.eps > 0);
  CHECK(lp.eps == doctest::Approx(lp.m - lp.p));
}

TEST_CASE("mixed basis integrals reproduce ‖ψ‖² and ‖ψ'‖²") {
  GridSpec g = th::small_grid(8, 16);
  const double beta = 2.0;
  const LiftProfile& lp = lift_profile(beta, g);
  std::vector<cplx> zero(g.n_z, 0.0);
  const cplx one(1.0, 0.0);
  const double m = lp.m;
  CHECK(mixed_inner_mode(lp, zero.data(), one, zero.data(), one).real() == doctest::Approx(m));
  // ∫ (q ψ² + ψ'²) = (q + β²) m.
  const double q = 0.7;
  CHECK(mixed_grad_inner_mode(lp, q, zero.data(), one, zero.data(), one).real() ==
        doctest::Approx((q + beta * beta) * m));
}
