// Hot paths: transforms, F assembly, one Picard window, oracle stepping.

#include <benchmark/benchmark.h>

#include <random>

#include "triphase/triphase.hpp"

using namespace triphase;

namespace {

GridSpec grid(int n) {
  GridSpec g;
  g.n_h = n;
  g.n_z = n;
  return g;
}

TriField random_field(const GridSpec& g) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TriField f = TriField::zeros(g);
  for (double& x : f.f_a) x = u(rng);
  for (double& x : f.f_b) x = u(rng);
  for (double& x : f.f_s) x = u(rng);
  return f;
}

void BM_ToSpectral(benchmark::State& st) {
  const TriField f = random_field(grid(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(to_spectral(f));
}
BENCHMARK(BM_ToSpectral)->Arg(16)->Arg(32)->Arg(64);

void BM_FromSpectral(benchmark::State& st) {
  const SpectralTri c = to_spectral(random_field(grid(static_cast<int>(st.range(0)))));
  for (auto _ : st) benchmark::DoNotOptimize(from_spectral(c));
}
BENCHMARK(BM_FromSpectral)->Arg(16)->Arg(32)->Arg(64);

void BM_AssembleF(benchmark::State& st) {
  const GridSpec g = grid(static_cast<int>(st.range(0)));
  PhysParams p;
  const SpectralTri v = to_spectral(lift_to_u(gaussian_bump().sample(g), p));
  const SpectralTri dv = apply_l_power(v, 1.0, p);
  for (auto _ : st) benchmark::DoNotOptimize(assemble_f(v, dv, p));
}
BENCHMARK(BM_AssembleF)->Arg(16)->Arg(32);

void BM_PicardWindow(benchmark::State& st) {
  const GridSpec g = grid(static_cast<int>(st.range(0)));
  PhysParams p;
  SolverConfig cfg;
  const SpectralTri v0 = to_spectral(lift_to_u(gaussian_bump().sample(g), p));
  for (auto _ : st) benchmark::DoNotOptimize(picard_window(v0, cfg, p));
}
BENCHMARK(BM_PicardWindow)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_OracleSteps(benchmark::State& st) {
  const GridSpec g = grid(static_cast<int>(st.range(0)));
  PhysParams p;
  const TriField th0 = gaussian_bump().sample(g);
  oracle::OracleOptions opt;
  opt.scheme = st.range(1) ? oracle::Scheme::Implicit : oracle::Scheme::Explicit;
  opt.dt = oracle::explicit_dt_limit(g.refined(2), p);
  const double T = 10 * opt.dt;
  opt.sample_dt = T;
  for (auto _ : st) benchmark::DoNotOptimize(oracle::oracle_solve(th0, T, p, 2, opt));
}
BENCHMARK(BM_OracleSteps)->Args({16, 0})->Args({16, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
