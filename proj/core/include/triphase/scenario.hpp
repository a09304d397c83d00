#pragma once

#include <functional>
#include <string>

#include "triphase/core_state.hpp"

namespace triphase {

// Initial data as functions of position. Bulk functions receive the distance
// z ≥ 0 from the interface (the lower slab is mirrored like the grid), so
// compatible data has bulk_a(x, y, 0) = bulk_b(x, y, 0) = surf(x, y).
struct InitialData {
  std::string name;
  std::function<double(double, double, double)> bulk_a, bulk_b;
  std::function<double(double, double)> surf;

  // Node samples with trace_a/trace_b taken from the bulk functions at z = 0.
  TriField sample(const GridSpec& g) const;
};

InitialData zero_data();

// θ_S = amp·exp(-|x_h - c|²/(2σ_h²)), θ_A = θ_B = θ_S·exp(-z²/(2σ_z²)).
InitialData gaussian_bump(double amp = 1.0, double sigma_h = 1.0, double sigma_z = 1.0,
                          double cx = 0.0, double cy = 0.0);

// θ_S Gaussian, θ_A = θ_B = θ_S e^{-βz}: the lifted bulk parts vanish.
InitialData pure_lift(double beta, double amp = 1.0, double sigma_h = 1.0);

// θ_A = amp·cos(2π k_h x/l_h)·sin(n π z/l_z), θ_B = θ_S = 0.
InitialData single_mode(const GridSpec& g, int k_h = 1, int n = 1, double amp = 1.0);

}  // namespace triphase
