#include "triphase/core_state.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "triphase/errors.hpp"
#include "triphase/spectral.hpp"

namespace triphase {

void PhysParams::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0) || !std::isfinite(v))
      throw ConfigError(std::string(name) + " must be a positive finite number");
  };
  pos(kappa_a, "kappa_a");
  pos(kappa_b, "kappa_b");
  pos(kappa_s_tilde, "kappa_s_tilde");
  pos(alpha_s, "alpha_s");
  pos(beta, "beta");
}

void GridSpec::validate() const {
  if (!(l_h > 0) || !(l_z > 0)) throw ConfigError("box lengths must be positive");
  if (n_h < 2 || n_h % 2 != 0) throw ConfigError("n_h must be an even integer >= 2");
  if (n_z < 1) throw ConfigError("n_z must be >= 1");
  if (!(dt > 0) || !(t_end > 0)) throw ConfigError("dt and t_end must be positive");
  steps();
}

int GridSpec::steps() const {
  double r = t_end / dt;
  double n = std::round(r);
  if (n < 1 || std::abs(r - n) > 1e-9 * std::max(1.0, r))
    throw ConfigError("t_end/dt must be a positive integer");
  return static_cast<int>(n);
}

double GridSpec::kz(int n) const { return (n + 1) * std::numbers::pi / l_z; }

double GridSpec::xi(int i) const {
  int k = i < n_h / 2 ? i : i - n_h;
  return 2.0 * std::numbers::pi * k / l_h;
}

GridSpec GridSpec::refined(int r) const {
  if (r < 1) throw ConfigError("resolution multiplier must be >= 1");
  GridSpec g = *this;
  g.n_h = n_h * r;
  g.n_z = (n_z + 1) * r - 1;  // keeps every coarse node on the fine grid
  return g;
}

bool same_shape(const GridSpec& a, const GridSpec& b) {
  return a.n_h == b.n_h && a.n_z == b.n_z && a.l_h == b.l_h && a.l_z == b.l_z;
}

TriField TriField::zeros(const GridSpec& g) {
  TriField f;
  f.grid = g;
  f.f_a.assign(g.bulk_size(), 0.0);
  f.f_b.assign(g.bulk_size(), 0.0);
  f.f_s.assign(g.surf_size(), 0.0);
  return f;
}

void TriField::check() const {
  if (f_a.size() != grid.bulk_size() || f_b.size() != grid.bulk_size() ||
      f_s.size() != grid.surf_size())
    throw ConfigError("TriField arrays do not match the grid");
  if ((!trace_a.empty() && trace_a.size() != grid.surf_size()) ||
      (!trace_b.empty() && trace_b.size() != grid.surf_size()))
    throw ConfigError("TriField trace arrays do not match the grid");
  for (const auto* v : {&f_a, &f_b, &f_s, &trace_a, &trace_b})
    for (double x : *v)
      if (!std::isfinite(x)) throw DomainError("TriField contains non-finite entries");
}

void Trajectory::check() const {
  if (times.size() != states.size()) throw StateError("times/states size mismatch");
  for (std::size_t j = 1; j < times.size(); ++j)
    if (!(times[j] > times[j - 1])) throw StateError("trajectory times must increase");
  if (!derivs.empty() && derivs.size() != states.size())
    throw StateError("derivs/states size mismatch");
}

double h_inner(const TriField& f, const TriField& g) {
  if (!same_shape(f.grid, g.grid) || f.f_a.size() != g.f_a.size() ||
      f.f_s.size() != g.f_s.size())
    throw ConfigError("h_inner: shape mismatch");
  const double dx2 = f.grid.dx() * f.grid.dx();
  const double dz = f.grid.dz();
  double bulk = 0, surf = 0;
  for (std::size_t k = 0; k < f.f_a.size(); ++k) bulk += f.f_a[k] * g.f_a[k] + f.f_b[k] * g.f_b[k];
  for (std::size_t k = 0; k < f.f_s.size(); ++k) surf += f.f_s[k] * g.f_s[k];
  return dx2 * (dz * bulk + f.weight_s * surf);
}

double h_norm(const TriField& f) { return std::sqrt(std::max(0.0, h_inner(f, f))); }

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double s = 0;
  for (std::size_t j = 1; j < t.size(); ++j) s += 0.5 * (t[j] - t[j - 1]) * (f[j] + f[j - 1]);
  return s;
}

double xt_norm(const Trajectory& traj, const PhysParams& params) {
  if (traj.empty()) throw StateError("xt_norm: empty trajectory");
  if (!traj.has_derivs()) throw StateError("xt_norm: trajectory has no stored derivatives");
  std::vector<double> d2(traj.states.size()), l2(traj.states.size());
  double sup = 0;
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    sup = std::max(sup, h_norm(traj.states[j]));
    d2[j] = std::pow(h_norm(traj.derivs[j]), 2);
    SpectralTri lv = apply_l_power(to_spectral(traj.states[j]), 1.0, params);
    l2[j] = std::pow(spectral_norm(lv), 2);
  }
  return sup + std::sqrt(trapezoid(traj.times, d2)) + std::sqrt(trapezoid(traj.times, l2));
}

TriField axpy(double a, const TriField& x, const TriField& y) {
  if (!same_shape(x.grid, y.grid)) throw ConfigError("axpy: shape mismatch");
  TriField r = y;
  for (std::size_t k = 0; k < r.f_a.size(); ++k) r.f_a[k] += a * x.f_a[k];
  for (std::size_t k = 0; k < r.f_b.size(); ++k) r.f_b[k] += a * x.f_b[k];
  for (std::size_t k = 0; k < r.f_s.size(); ++k) r.f_s[k] += a * x.f_s[k];
  if (x.has_traces() && y.has_traces()) {
    for (std::size_t k = 0; k < r.trace_a.size(); ++k) r.trace_a[k] += a * x.trace_a[k];
    for (std::size_t k = 0; k < r.trace_b.size(); ++k) r.trace_b[k] += a * x.trace_b[k];
  } else {
    r.trace_a.clear();
    r.trace_b.clear();
  }
  return r;
}

TriField operator-(const TriField& x, const TriField& y) { return axpy(-1.0, y, x); }

}  // namespace triphase
