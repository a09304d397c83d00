#include "triphase/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "triphase/errors.hpp"

namespace triphase {

namespace {

// FFTW planning is not thread safe; execution on fresh fftw_malloc buffers
// with the new-array interface is. FFTW_ESTIMATE keeps plans deterministic.
struct Plans {
  fftw_plan dst = nullptr;       // n_z-point RODFT00, n_h² columns
  fftw_plan fwd_bulk = nullptr;  // 2-D r2c, n_z interleaved transforms
  fftw_plan inv_bulk = nullptr;
  fftw_plan fwd_surf = nullptr;
  fftw_plan inv_surf = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::pair<int, int>, Plans> g_plans;

template <class T>
struct FftwBuf {
  T* p;
  explicit FftwBuf(std::size_t n) : p(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)))) {}
  ~FftwBuf() { fftw_free(p); }
  FftwBuf(const FftwBuf&) = delete;
  FftwBuf& operator=(const FftwBuf&) = delete;
};

const Plans& plans_for(int n_h, int n_z) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_pair(n_h, n_z);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;

  const std::size_t ns = static_cast<std::size_t>(n_h) * n_h;
  const std::size_t nsc = static_cast<std::size_t>(n_h) * (n_h / 2 + 1);
  FftwBuf<double> r(ns * n_z);
  FftwBuf<fftw_complex> c(nsc * n_z);
  Plans pl;
  int nz = n_z;
  fftw_r2r_kind kind = FFTW_RODFT00;
  pl.dst = fftw_plan_many_r2r(1, &nz, static_cast<int>(ns), r.p, nullptr, 1, n_z, r.p, nullptr,
                              1, n_z, &kind, FFTW_ESTIMATE);
  int dims[2] = {n_h, n_h};
  pl.fwd_bulk = fftw_plan_many_dft_r2c(2, dims, n_z, r.p, nullptr, n_z, 1, c.p, nullptr, n_z, 1,
                                       FFTW_ESTIMATE);
  pl.inv_bulk = fftw_plan_many_dft_c2r(2, dims, n_z, c.p, nullptr, n_z, 1, r.p, nullptr, n_z, 1,
                                       FFTW_ESTIMATE);
  pl.fwd_surf = fftw_plan_dft_r2c_2d(n_h, n_h, r.p, c.p, FFTW_ESTIMATE);
  pl.inv_surf = fftw_plan_dft_c2r_2d(n_h, n_h, c.p, r.p, FFTW_ESTIMATE);
  return g_plans.emplace(key, pl).first->second;
}

}  // namespace

std::vector<cplx> bulk_forward(const GridSpec& g, const std::vector<double>& f) {
  if (f.size() != g.bulk_size()) throw ConfigError("bulk_forward: shape mismatch");
  const Plans& pl = plans_for(g.n_h, g.n_z);
  FftwBuf<double> r(g.bulk_size());
  FftwBuf<fftw_complex> c(g.hmodes() * g.n_z);
  std::memcpy(r.p, f.data(), sizeof(double) * g.bulk_size());
  fftw_execute_r2r(pl.dst, r.p, r.p);
  fftw_execute_dft_r2c(pl.fwd_bulk, r.p, c.p);
  const double scale = 1.0 / ((g.n_z + 1.0) * g.n_h * g.n_h);
  std::vector<cplx> out(g.hmodes() * g.n_z);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = cplx(c.p[k][0], c.p[k][1]) * scale;
  return out;
}

std::vector<double> bulk_inverse(const GridSpec& g, const std::vector<cplx>& in) {
  if (in.size() != g.hmodes() * g.n_z) throw ConfigError("bulk_inverse: shape mismatch");
  const Plans& pl = plans_for(g.n_h, g.n_z);
  FftwBuf<double> r(g.bulk_size());
  FftwBuf<fftw_complex> c(g.hmodes() * g.n_z);
  for (std::size_t k = 0; k < in.size(); ++k) {
    c.p[k][0] = in[k].real();
    c.p[k][1] = in[k].imag();
  }
  fftw_execute_dft_c2r(pl.inv_bulk, c.p, r.p);
  fftw_execute_r2r(pl.dst, r.p, r.p);
  std::vector<double> out(g.bulk_size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = 0.5 * r.p[k];
  return out;
}

SpectralTri SpectralTri::zeros(const GridSpec& g) {
  SpectralTri c;
  c.grid = g;
  c.c_a.assign(g.hmodes() * g.n_z, 0.0);
  c.c_b.assign(g.hmodes() * g.n_z, 0.0);
  c.c_s.assign(g.hmodes(), 0.0);
  return c;
}

std::vector<HMode> hmodes(const GridSpec& g) {
  std::vector<HMode> out(g.hmodes());
  const int nhc = g.n_hc();
  for (int i = 0; i < g.n_h; ++i)
    for (int j = 0; j < nhc; ++j) {
      double xi = g.xi(i), eta = 2.0 * std::numbers::pi * j / g.l_h;
      double w = (j == 0 || 2 * j == g.n_h) ? 1.0 : 2.0;
      out[static_cast<std::size_t>(i) * nhc + j] = {xi * xi + eta * eta, w};
    }
  return out;
}

std::vector<cplx> surface_forward(const GridSpec& g, const std::vector<double>& f) {
  if (f.size() != g.surf_size()) throw ConfigError("surface_forward: shape mismatch");
  const Plans& pl = plans_for(g.n_h, g.n_z);
  FftwBuf<double> r(g.surf_size());
  FftwBuf<fftw_complex> c(g.hmodes());
  std::memcpy(r.p, f.data(), sizeof(double) * g.surf_size());
  fftw_execute_dft_r2c(pl.fwd_surf, r.p, c.p);
  const double scale = 1.0 / (static_cast<double>(g.n_h) * g.n_h);
  std::vector<cplx> out(g.hmodes());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = cplx(c.p[k][0], c.p[k][1]) * scale;
  return out;
}

std::vector<double> surface_inverse(const GridSpec& g, const std::vector<cplx>& in) {
  if (in.size() != g.hmodes()) throw ConfigError("surface_inverse: shape mismatch");
  const Plans& pl = plans_for(g.n_h, g.n_z);
  FftwBuf<double> r(g.surf_size());
  FftwBuf<fftw_complex> c(g.hmodes());
  for (std::size_t k = 0; k < in.size(); ++k) {
    c.p[k][0] = in[k].real();
    c.p[k][1] = in[k].imag();
  }
  fftw_execute_dft_c2r(pl.inv_surf, c.p, r.p);
  return std::vector<double>(r.p, r.p + g.surf_size());
}

SpectralTri to_spectral(const TriField& f) {
  f.grid.validate();
  if (f.f_a.size() != f.grid.bulk_size() || f.f_b.size() != f.grid.bulk_size() ||
      f.f_s.size() != f.grid.surf_size())
    throw ConfigError("to_spectral: arrays do not match grid");
  SpectralTri c;
  c.grid = f.grid;
  c.weight_s = f.weight_s;
  c.c_a = bulk_forward(f.grid, f.f_a);
  c.c_b = bulk_forward(f.grid, f.f_b);
  c.c_s = surface_forward(f.grid, f.f_s);
  return c;
}

TriField from_spectral(const SpectralTri& c) {
  TriField f;
  f.grid = c.grid;
  f.weight_s = c.weight_s;
  f.f_a = bulk_inverse(c.grid, c.c_a);
  f.f_b = bulk_inverse(c.grid, c.c_b);
  f.f_s = surface_inverse(c.grid, c.c_s);
  return f;
}

Eigen eigenvalues(const GridSpec& g, const PhysParams& p) {
  auto hm = hmodes(g);
  Eigen e;
  e.a.resize(g.hmodes() * g.n_z);
  e.b.resize(g.hmodes() * g.n_z);
  e.s.resize(g.hmodes());
  for (std::size_t m = 0; m < hm.size(); ++m) {
    e.s[m] = p.kappa_s_tilde * hm[m].q;
    for (int n = 0; n < g.n_z; ++n) {
      double k = g.kz(n);
      e.a[m * g.n_z + n] = p.kappa_a * (hm[m].q + k * k);
      e.b[m * g.n_z + n] = p.kappa_b * (hm[m].q + k * k);
    }
  }
  return e;
}

namespace {
template <class Fn>
SpectralTri map_eigen(const SpectralTri& c, const PhysParams& p, Fn fn) {
  Eigen e = eigenvalues(c.grid, p);
  SpectralTri r = c;
  for (std::size_t k = 0; k < r.c_a.size(); ++k) r.c_a[k] *= fn(e.a[k]);
  for (std::size_t k = 0; k < r.c_b.size(); ++k) r.c_b[k] *= fn(e.b[k]);
  for (std::size_t k = 0; k < r.c_s.size(); ++k) r.c_s[k] *= fn(e.s[k]);
  return r;
}
}  // namespace

SpectralTri apply_semigroup(const SpectralTri& c, double t, const PhysParams& p) {
  if (!(t >= 0)) throw DomainError("apply_semigroup: t must be >= 0");
  if (t == 0) return c;
  return map_eigen(c, p, [t](double lam) { return std::exp(-t * lam); });
}

SpectralTri apply_l_power(const SpectralTri& c, double q, const PhysParams& p) {
  if (!(q >= 0 && q <= 1)) throw DomainError("apply_l_power: q must lie in [0,1]");
  if (q == 0) return c;
  if (q == 1) return map_eigen(c, p, [](double lam) { return lam; });
  return map_eigen(c, p, [q](double lam) { return std::pow(lam, q); });
}

double spectral_inner(const SpectralTri& f, const SpectralTri& g) {
  if (!same_shape(f.grid, g.grid)) throw ConfigError("spectral_inner: shape mismatch");
  auto hm = hmodes(f.grid);
  const int nz = f.grid.n_z;
  double bulk = 0, surf = 0;
  for (std::size_t m = 0; m < hm.size(); ++m) {
    double acc = 0;
    for (int n = 0; n < nz; ++n) {
      std::size_t k = m * nz + n;
      acc += (f.c_a[k] * std::conj(g.c_a[k])).real() + (f.c_b[k] * std::conj(g.c_b[k])).real();
    }
    bulk += hm[m].w * acc;
    surf += hm[m].w * (f.c_s[m] * std::conj(g.c_s[m])).real();
  }
  const double area = f.grid.l_h * f.grid.l_h;
  return area * (0.5 * f.grid.l_z * bulk + f.weight_s * surf);
}

double spectral_norm(const SpectralTri& c) { return std::sqrt(std::max(0.0, spectral_inner(c, c))); }

SpectralTri axpy(double a, const SpectralTri& x, const SpectralTri& y) {
  if (!same_shape(x.grid, y.grid)) throw ConfigError("axpy: shape mismatch");
  SpectralTri r = y;
  for (std::size_t k = 0; k < r.c_a.size(); ++k) r.c_a[k] += a * x.c_a[k];
  for (std::size_t k = 0; k < r.c_b.size(); ++k) r.c_b[k] += a * x.c_b[k];
  for (std::size_t k = 0; k < r.c_s.size(); ++k) r.c_s[k] += a * x.c_s[k];
  return r;
}

double eval_kernel_halfspace(const Point3& x, const Point3& y, double t, double kappa, Side side) {
  if (!(t > 0)) throw DomainError("eval_kernel_halfspace: t must be > 0");
  if (!(kappa > 0)) throw DomainError("eval_kernel_halfspace: kappa must be > 0");
  const double sgn = side == Side::Upper ? 1.0 : -1.0;
  if (sgn * x[2] < 0 || sgn * y[2] < 0)
    throw DomainError("eval_kernel_halfspace: points must lie in the selected half space");
  const double s = 4.0 * kappa * t;
  const double norm = std::pow(std::numbers::pi * s, -1.5);
  const double dh = (x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]);
  const double dm = (x[2] - y[2]) * (x[2] - y[2]);
  const double di = (x[2] + y[2]) * (x[2] + y[2]);
  // Φ(x-y) - Φ(x-y*), with the common horizontal factor pulled out.
  return norm * std::exp(-dh / s) * (std::exp(-dm / s) - std::exp(-di / s));
}

double eval_kernel_surface(const Point2& x_h, double t, const PhysParams& p) {
  if (!(t > 0)) throw DomainError("eval_kernel_surface: t must be > 0");
  const double s = 4.0 * p.kappa_s_tilde * t;
  return std::exp(-(x_h[0] * x_h[0] + x_h[1] * x_h[1]) / s) / (std::numbers::pi * s);
}

const char* fft_backend_version() { return fftw_version; }

}  // namespace triphase
