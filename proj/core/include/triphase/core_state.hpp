#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace triphase {

// Material constants. α_A = α_B = 1 throughout; κ_S is derived.
struct PhysParams {
  double kappa_a = 1.0;
  double kappa_b = 1.0;
  double kappa_s_tilde = 1.0;
  double alpha_s = 10.0;
  double beta = 2.0;

  // Existence thresholds, present once constants have been measured.
  std::optional<double> alpha_0;
  std::optional<double> beta_0;

  double kappa_s() const { return kappa_s_tilde * alpha_s; }
  void validate() const;
};

// Periodic box [-l_h/2, l_h/2)^2 horizontally, slab (0, l_z) per half space
// with n_z interior nodes z_n = (n+1) l_z/(n_z+1). The lower slab is stored
// mirrored: index n of f_b sits at x3 = -z_n.
struct GridSpec {
  double l_h = 16.0;
  int n_h = 32;
  double l_z = 8.0;
  int n_z = 32;
  double dt = 1e-3;
  double t_end = 1.0;

  void validate() const;
  int steps() const;

  double dx() const { return l_h / n_h; }
  double dz() const { return l_z / (n_z + 1); }
  double x(int i) const { return -0.5 * l_h + i * dx(); }
  double z(int n) const { return (n + 1) * dz(); }
  double kz(int n) const;  // (n+1) π / l_z

  // Horizontal wavenumber for FFT index i in [0, n_h).
  double xi(int i) const;

  int n_hc() const { return n_h / 2 + 1; }
  std::size_t surf_size() const { return static_cast<std::size_t>(n_h) * n_h; }
  std::size_t bulk_size() const { return surf_size() * n_z; }
  std::size_t hmodes() const { return static_cast<std::size_t>(n_h) * n_hc(); }

  GridSpec refined(int multiplier) const;
};

bool same_shape(const GridSpec& a, const GridSpec& b);

// Element of H sampled on a GridSpec. Bulk index (i*n_h + j)*n_z + n.
// trace_a / trace_b optionally carry interface values x3 = 0 of θ-type
// bulk fields, which interior nodes alone do not determine.
struct TriField {
  GridSpec grid;
  std::vector<double> f_a, f_b, f_s;
  std::vector<double> trace_a, trace_b;
  double weight_s = 1.0;

  static TriField zeros(const GridSpec& g);
  bool has_traces() const { return !trace_a.empty() && !trace_b.empty(); }
  std::size_t bulk_index(int i, int j, int n) const {
    return (static_cast<std::size_t>(i) * grid.n_h + j) * grid.n_z + n;
  }
  std::size_t surf_index(int i, int j) const {
    return static_cast<std::size_t>(i) * grid.n_h + j;
  }
  void check() const;
};

// Per-time L2 terms of the weighted energy and the dissipation rates.
// diss_* already include the conductivities: diss_a = κ_A ‖∇θ_A‖².
struct EnergySample {
  double t = 0;
  double bulk_a = 0, bulk_b = 0;  // ‖θ_A‖², ‖θ_B‖²
  double surf = 0;                // α_S ‖θ_S‖²
  double diss_a = 0, diss_b = 0;  // κ_A‖∇θ_A‖², κ_B‖∇θ_B‖²
  double diss_s = 0;              // κ̃_S α_S ‖∇_h θ_S‖²
  double energy() const { return bulk_a + bulk_b + surf; }
  double dissipation() const { return diss_a + diss_b + diss_s; }
};

// States may be thinned (every k-th step); energy_ledger, when filled by
// a solver, holds every time step.
struct Trajectory {
  std::vector<double> times;
  std::vector<TriField> states;
  std::vector<TriField> derivs;
  std::vector<EnergySample> energy_ledger;

  bool empty() const { return states.empty(); }
  bool has_derivs() const { return !derivs.empty() && derivs.size() == states.size(); }
  void check() const;
};

double h_inner(const TriField& f, const TriField& g);
double h_norm(const TriField& f);
double xt_norm(const Trajectory& traj, const PhysParams& params);

// Elementwise helpers (same grid required).
TriField axpy(double a, const TriField& x, const TriField& y);  // a*x + y
TriField operator-(const TriField& x, const TriField& y);

// Trapezoid rule on a uniform or non-uniform grid.
double trapezoid(const std::vector<double>& t, const std::vector<double>& f);

}  // namespace triphase
