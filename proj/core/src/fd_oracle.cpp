#include "triphase/fd_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "triphase/errors.hpp"

namespace triphase::oracle {

namespace {

// State packed as [a bulk | b bulk | surface], same index order as TriField.
struct Operator {
  GridSpec g;
  PhysParams p;
  int nh, nz;
  double dx, h;
  std::size_t nb, ns;
  std::vector<double> mass;  // h per bulk cell, α_S + h per surface cell
  bool hold_surface = false;

  Operator(const GridSpec& grid, const PhysParams& params, bool hold)
      : g(grid), p(params), nh(grid.n_h), nz(grid.n_z), dx(grid.dx()), h(grid.dz()),
        nb(grid.bulk_size()), ns(grid.surf_size()), hold_surface(hold) {
    mass.assign(2 * nb + ns, h);
    std::fill(mass.begin() + 2 * nb, mass.end(), p.alpha_s + h);
  }

  std::size_t col(int i, int j) const {
    return static_cast<std::size_t>((i + nh) % nh) * nh + (j + nh) % nh;
  }

  // y = K x, the symmetric stiffness (mass-weighted negative Laplacian).
  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    const double* xa = x.data();
    const double* xb = x.data() + nb;
    const double* xs = x.data() + 2 * nb;
    double* ya = y.data();
    double* yb = y.data() + nb;
    double* ys = y.data() + 2 * nb;
    const double ih2 = 1.0 / (dx * dx);
    for (int i = 0; i < nh; ++i)
      for (int j = 0; j < nh; ++j) {
        const std::size_t c = col(i, j);
        const std::size_t e = col(i + 1, j), w = col(i - 1, j), n = col(i, j + 1), s = col(i, j - 1);
        for (int side = 0; side < 2; ++side) {
          const double* u = side == 0 ? xa : xb;
          double* out = side == 0 ? ya : yb;
          const double kap = side == 0 ? p.kappa_a : p.kappa_b;
          for (int k = 0; k < nz; ++k) {
            const double uc = u[c * nz + k];
            const double lh = (u[e * nz + k] + u[w * nz + k] + u[n * nz + k] + u[s * nz + k] - 4 * uc) * ih2;
            const double below = k == 0 ? xs[c] : u[c * nz + k - 1];
            const double above = k + 1 == nz ? 0.0 : u[c * nz + k + 1];
            out[c * nz + k] = -kap * (h * lh + (above - 2 * uc + below) / h);
          }
        }
        if (hold_surface) {
          ys[c] = 0.0;
          continue;
        }
        const double sc = xs[c];
        const double lh = (xs[e] + xs[w] + xs[n] + xs[s] - 4 * sc) * ih2;
        const double coef = p.kappa_s() + 0.5 * h * (p.kappa_a + p.kappa_b);
        ys[c] = -(coef * lh + p.kappa_a * (xa[c * nz] - sc) / h + p.kappa_b * (xb[c * nz] - sc) / h);
      }
  }

  std::vector<double> diag(double dt) const {
    std::vector<double> d(mass);
    const double ih2 = 1.0 / (dx * dx);
    for (std::size_t k = 0; k < nb; ++k) {
      d[k] += dt * p.kappa_a * (4 * h * ih2 + 2 / h);
      d[nb + k] += dt * p.kappa_b * (4 * h * ih2 + 2 / h);
    }
    const double coef = p.kappa_s() + 0.5 * h * (p.kappa_a + p.kappa_b);
    for (std::size_t k = 0; k < ns; ++k)
      d[2 * nb + k] += hold_surface ? 0.0 : dt * (4 * coef * ih2 + (p.kappa_a + p.kappa_b) / h);
    return d;
  }
};

std::vector<double> pack(const TriField& f) {
  std::vector<double> x;
  x.reserve(f.f_a.size() * 2 + f.f_s.size());
  x.insert(x.end(), f.f_a.begin(), f.f_a.end());
  x.insert(x.end(), f.f_b.begin(), f.f_b.end());
  x.insert(x.end(), f.f_s.begin(), f.f_s.end());
  return x;
}

TriField unpack(const std::vector<double>& x, const GridSpec& g) {
  TriField f = TriField::zeros(g);
  const std::size_t nb = g.bulk_size();
  std::copy(x.begin(), x.begin() + nb, f.f_a.begin());
  std::copy(x.begin() + nb, x.begin() + 2 * nb, f.f_b.begin());
  std::copy(x.begin() + 2 * nb, x.end(), f.f_s.begin());
  f.trace_a = f.f_s;  // the interface unknown is shared
  f.trace_b = f.f_s;
  return f;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Jacobi-preconditioned CG on (M + dt K) x = rhs, warm-started from x.
void cg_solve(const Operator& op, double dt, const std::vector<double>& rhs, std::vector<double>& x,
              int max_iter, double tol) {
  const std::size_t n = rhs.size();
  const std::vector<double> d = op.diag(dt);
  std::vector<double> r(n), z(n), pv(n), ap(n), kx(n);
  op.apply(x, kx);
  for (std::size_t k = 0; k < n; ++k) r[k] = rhs[k] - (op.mass[k] * x[k] + dt * kx[k]);
  const double bnorm = std::sqrt(dot(rhs, rhs));
  if (bnorm == 0) {
    std::fill(x.begin(), x.end(), 0.0);
    return;
  }
  for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / d[k];
  pv = z;
  double rz = dot(r, z);
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(dot(r, r)) <= tol * bnorm) return;
    op.apply(pv, kx);
    for (std::size_t k = 0; k < n; ++k) ap[k] = op.mass[k] * pv[k] + dt * kx[k];
    const double alpha = rz / dot(pv, ap);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * pv[k];
      r[k] -= alpha * ap[k];
      z[k] = r[k] / d[k];
    }
    const double rz2 = dot(r, z);
    const double beta = rz2 / rz;
    rz = rz2;
    for (std::size_t k = 0; k < n; ++k) pv[k] = z[k] + beta * pv[k];
  }
  throw ConfigError("oracle: CG did not reach the requested tolerance");
}

// Tensor linear interpolation from a coarse grid onto grid.refined(r); the
// interface value θ_S closes the vertical stencil below the first node.
TriField interpolate(const TriField& c, int r) {
  const GridSpec& g = c.grid;
  const GridSpec f = g.refined(r);
  TriField out = TriField::zeros(f);
  auto bulk_at = [&](const std::vector<double>& v, const std::vector<double>& tr, int i, int j,
                     double z) {
    // Vertical: nodes at z_n, interface at 0 (value tr), wall at l_z (0).
    const double s = z / g.dz();
    const int lo = static_cast<int>(std::floor(s));
    const double w = s - lo;
    auto val = [&](int n) {
      if (n <= 0) return tr[c.surf_index(i, j)];
      if (n >= g.n_z + 1) return 0.0;
      return v[c.bulk_index(i, j, n - 1)];
    };
    return (1 - w) * val(lo) + w * val(lo + 1);
  };
  const std::vector<double>& ta = c.has_traces() ? c.trace_a : c.f_s;
  const std::vector<double>& tb = c.has_traces() ? c.trace_b : c.f_s;
  for (int i = 0; i < f.n_h; ++i)
    for (int j = 0; j < f.n_h; ++j) {
      const int i0 = i / r, j0 = j / r;
      const double wi = double(i % r) / r, wj = double(j % r) / r;
      const int i1 = (i0 + 1) % g.n_h, j1 = (j0 + 1) % g.n_h;
      auto hmix = [&](auto fn) {
        return (1 - wi) * (1 - wj) * fn(i0, j0) + wi * (1 - wj) * fn(i1, j0) +
               (1 - wi) * wj * fn(i0, j1) + wi * wj * fn(i1, j1);
      };
      out.f_s[out.surf_index(i, j)] = hmix([&](int a, int b) { return c.f_s[c.surf_index(a, b)]; });
      for (int n = 0; n < f.n_z; ++n) {
        const double z = f.z(n);
        out.f_a[out.bulk_index(i, j, n)] = hmix([&](int a, int b) { return bulk_at(c.f_a, ta, a, b, z); });
        out.f_b[out.bulk_index(i, j, n)] = hmix([&](int a, int b) { return bulk_at(c.f_b, tb, a, b, z); });
      }
    }
  return out;
}

Trajectory run(const TriField& start, const GridSpec& coarse, double t_end, const PhysParams& p,
               const OracleOptions& opt) {
  const GridSpec& g = start.grid;
  Operator op(g, p, opt.hold_surface);
  const double limit = explicit_dt_limit(g, p);
  double dt = opt.dt;
  if (opt.scheme == Scheme::Explicit) {
    if (dt == 0) dt = limit;
    if (dt > limit * (1 + 1e-12))
      throw ConfigError("oracle: explicit dt " + std::to_string(dt) + " exceeds stability limit " +
                        std::to_string(limit));
  } else if (dt == 0) {
    dt = coarse.dt;
  }
  const double sample = opt.sample_dt > 0 ? opt.sample_dt : coarse.dt;
  const int n_samples = static_cast<int>(std::llround(t_end / sample));
  if (n_samples < 1 || std::abs(n_samples * sample - t_end) > 1e-9 * std::max(1.0, t_end))
    throw ConfigError("oracle: t_end must be a whole number of sample intervals");
  // Whole number of steps per sample interval, no larger than dt.
  const int sub = std::max(1, static_cast<int>(std::ceil(sample / dt - 1e-9)));
  dt = sample / sub;

  std::vector<double> x = pack(start), kx(x.size()), rhs(x.size());
  Trajectory traj;
  auto emit = [&](double t) {
    TriField th = unpack(x, g);
    if (opt.observer) opt.observer(t, th);
    if (!opt.keep_states) return;
    op.apply(x, kx);
    std::vector<double> dx(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) dx[k] = -kx[k] / op.mass[k];
    traj.times.push_back(t);
    traj.states.push_back(std::move(th));
    traj.derivs.push_back(unpack(dx, g));
  };
  emit(0.0);
  for (int s = 1; s <= n_samples; ++s) {
    for (int k = 0; k < sub; ++k) {
      if (opt.scheme == Scheme::Explicit) {
        op.apply(x, kx);
        for (std::size_t q = 0; q < x.size(); ++q) x[q] -= dt * kx[q] / op.mass[q];
      } else {
        for (std::size_t q = 0; q < x.size(); ++q) rhs[q] = op.mass[q] * x[q];
        cg_solve(op, dt, rhs, x, opt.cg_max_iter, opt.cg_tol);
      }
    }
    emit(s * sample);
  }
  return traj;
}

void check_compatible(const TriField& th) {
  if (!th.has_traces()) return;
  double gap = 0;
  for (std::size_t c = 0; c < th.f_s.size(); ++c)
    gap = std::max({gap, std::abs(th.trace_a[c] - th.f_s[c]), std::abs(th.trace_b[c] - th.f_s[c])});
  if (gap > 1e-8) throw DataError("oracle: initial traces differ from theta_S", gap);
}

}  // namespace

double explicit_dt_limit(const GridSpec& g, const PhysParams& p) {
  const double hmin = std::min(g.dx(), g.dz());
  const double kmax = std::max({p.kappa_a, p.kappa_b, p.kappa_s_tilde});
  return hmin * hmin / (6.0 * kmax);
}

double oracle_energy(const TriField& th, const PhysParams& p) {
  const double dx2 = th.grid.dx() * th.grid.dx(), h = th.grid.dz();
  double b = 0, s = 0;
  for (std::size_t k = 0; k < th.f_a.size(); ++k) b += th.f_a[k] * th.f_a[k] + th.f_b[k] * th.f_b[k];
  for (double v : th.f_s) s += v * v;
  return dx2 * (h * b + (p.alpha_s + h) * s);
}

Trajectory oracle_solve(const TriField& theta0, double t_end, const PhysParams& params,
                        int multiplier, const OracleOptions& opt) {
  theta0.check();
  params.validate();
  check_compatible(theta0);
  TriField start = multiplier == 1 ? theta0 : interpolate(theta0, multiplier);
  return run(start, theta0.grid, t_end, params, opt);
}

Trajectory oracle_solve(const InitialData& data, const GridSpec& grid, double t_end,
                        const PhysParams& params, int multiplier, const OracleOptions& opt) {
  params.validate();
  TriField start = data.sample(grid.refined(multiplier));
  check_compatible(start);
  return run(start, grid, t_end, params, opt);
}

}  // namespace triphase::oracle
