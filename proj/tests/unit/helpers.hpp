#pragma once

#include <random>

#include "triphase/triphase.hpp"

namespace th {

inline triphase::GridSpec small_grid(int n_h = 8, int n_z = 8) {
  triphase::GridSpec g;
  g.n_h = n_h;
  g.n_z = n_z;
  return g;
}

inline triphase::TriField random_field(const triphase::GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  triphase::TriField f = triphase::TriField::zeros(g);
  for (double& x : f.f_a) x = u(rng);
  for (double& x : f.f_b) x = u(rng);
  for (double& x : f.f_s) x = u(rng);
  return f;
}

inline triphase::SpectralTri random_spectral(const triphase::GridSpec& g, std::uint64_t seed) {
  return triphase::to_spectral(random_field(g, seed));
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace th
