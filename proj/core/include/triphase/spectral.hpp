#pragma once

#include <array>
#include <complex>
#include <vector>

#include "triphase/core_state.hpp"

namespace triphase {

using cplx = std::complex<double>;

// Coefficients in the basis e^{iξ·x_h} sin(k_n z). Only the Hermitian half
// j = 0..n_h/2 of the second horizontal axis is stored (real fields);
// hmode_weight() gives the multiplicity of each stored mode.
// Bulk index (i*n_hc + j)*n_z + n, surface index i*n_hc + j.
struct SpectralTri {
  GridSpec grid;
  std::vector<cplx> c_a, c_b, c_s;
  double weight_s = 1.0;

  static SpectralTri zeros(const GridSpec& g);
};

// Per stored horizontal mode: |ξ|² and Hermitian multiplicity (1 or 2).
struct HMode {
  double q;
  double w;
};
std::vector<HMode> hmodes(const GridSpec& g);

// Forward FFT in x_h and DST-I in x3. Stored traces are ignored: the sine
// basis forces zero interface values, so θ-type fields get projected.
SpectralTri to_spectral(const TriField& f);
TriField from_spectral(const SpectralTri& c);

// Single bulk array (n_h × n_h × n_z ↔ n_h × n_hc × n_z).
std::vector<cplx> bulk_forward(const GridSpec& g, const std::vector<double>& f);
std::vector<double> bulk_inverse(const GridSpec& g, const std::vector<cplx>& c);

// Horizontal-only transforms of a surface array (n_h × n_h ↔ n_h × n_hc).
std::vector<cplx> surface_forward(const GridSpec& g, const std::vector<double>& f);
std::vector<double> surface_inverse(const GridSpec& g, const std::vector<cplx>& c);

// Eigenvalues of L on each coefficient slot.
struct Eigen {
  std::vector<double> a, b, s;
};
Eigen eigenvalues(const GridSpec& g, const PhysParams& p);

SpectralTri apply_semigroup(const SpectralTri& c, double t, const PhysParams& p);
SpectralTri apply_l_power(const SpectralTri& c, double q, const PhysParams& p);

// ‖·‖_H evaluated from coefficients (Parseval with the grid's quadrature).
double spectral_inner(const SpectralTri& f, const SpectralTri& g);
double spectral_norm(const SpectralTri& c);

SpectralTri axpy(double a, const SpectralTri& x, const SpectralTri& y);

using Point3 = std::array<double, 3>;
using Point2 = std::array<double, 2>;

enum class Side { Upper, Lower };

// Dirichlet heat kernel of ∂_t - κΔ on the half space selected by side.
double eval_kernel_halfspace(const Point3& x, const Point3& y, double t, double kappa,
                             Side side);
// exp(-|x_h|²/(4κ̃_S t)) / (4π κ̃_S t).
double eval_kernel_surface(const Point2& x_h, double t, const PhysParams& p);

// Version string of the FFT backend, for run manifests.
const char* fft_backend_version();

}  // namespace triphase
