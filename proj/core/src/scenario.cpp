#include "triphase/scenario.hpp"

#include <cmath>
#include <numbers>

namespace triphase {

TriField InitialData::sample(const GridSpec& g) const {
  TriField f = TriField::zeros(g);
  f.trace_a.assign(g.surf_size(), 0.0);
  f.trace_b.assign(g.surf_size(), 0.0);
  for (int i = 0; i < g.n_h; ++i)
    for (int j = 0; j < g.n_h; ++j) {
      const double x = g.x(i), y = g.x(j);
      const std::size_t c = f.surf_index(i, j);
      f.f_s[c] = surf(x, y);
      f.trace_a[c] = bulk_a(x, y, 0.0);
      f.trace_b[c] = bulk_b(x, y, 0.0);
      for (int n = 0; n < g.n_z; ++n) {
        f.f_a[f.bulk_index(i, j, n)] = bulk_a(x, y, g.z(n));
        f.f_b[f.bulk_index(i, j, n)] = bulk_b(x, y, g.z(n));
      }
    }
  return f;
}

InitialData zero_data() {
  auto z3 = [](double, double, double) { return 0.0; };
  return {"zero", z3, z3, [](double, double) { return 0.0; }};
}

InitialData gaussian_bump(double amp, double sigma_h, double sigma_z, double cx, double cy) {
  auto surf = [=](double x, double y) {
    const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    return amp * std::exp(-r2 / (2 * sigma_h * sigma_h));
  };
  auto bulk = [=](double x, double y, double z) {
    return surf(x, y) * std::exp(-z * z / (2 * sigma_z * sigma_z));
  };
  return {"gaussian-bump", bulk, bulk, surf};
}

InitialData pure_lift(double beta, double amp, double sigma_h) {
  auto surf = [=](double x, double y) {
    return amp * std::exp(-(x * x + y * y) / (2 * sigma_h * sigma_h));
  };
  auto bulk = [=](double x, double y, double z) { return surf(x, y) * std::exp(-beta * z); };
  return {"pure-lift", bulk, bulk, surf};
}

InitialData single_mode(const GridSpec& g, int k_h, int n, double amp) {
  const double kx = 2 * std::numbers::pi * k_h / g.l_h, kz = n * std::numbers::pi / g.l_z;
  auto a = [=](double x, double, double z) { return amp * std::cos(kx * x) * std::sin(kz * z); };
  return {"single-mode", a, [](double, double, double) { return 0.0; },
          [](double, double) { return 0.0; }};
}

}  // namespace triphase
