#include <benchmark/benchmark.h>

#include "mgsim/diagnostics.hpp"
#include "mgsim/fft.hpp"
#include "mgsim/initial_data.hpp"
#include "mgsim/solver.hpp"

namespace {

mgsim::PhysicalField sample_field(int n) {
  const mgsim::Grid g{n, n, n};
  return mgsim::io::random_bandlimited(g, {1, n / 4, 1.0, 7}, true);
}

void BM_ForwardTransform(benchmark::State& st) {
  const auto f = sample_field(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(mgsim::spectral::forward_transform(f));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(f.grid().size()));
}
BENCHMARK(BM_ForwardTransform)->Arg(32)->Arg(64);

void BM_InverseTransform(benchmark::State& st) {
  const auto h = mgsim::spectral::forward_transform(sample_field(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(mgsim::spectral::inverse_transform(h));
}
BENCHMARK(BM_InverseTransform)->Arg(32)->Arg(64);

void BM_NonlinearTerm(benchmark::State& st) {
  const auto f = sample_field(static_cast<int>(st.range(0)));
  const auto m = mgsim::velocity::mg_symbol({}, f.grid());
  const auto h = mgsim::spectral::forward_transform(f);
  for (auto _ : st) benchmark::DoNotOptimize(mgsim::solver::nonlinear_term(m, h));
}
BENCHMARK(BM_NonlinearTerm)->Arg(32)->Arg(64);

void BM_Step(benchmark::State& st) {
  const auto f = sample_field(32);
  const auto m = mgsim::velocity::mg_symbol({}, f.grid());
  mgsim::solver::SolverConfig cfg;
  cfg.kappa = 1.0;
  cfg.dt = 1e-3;
  cfg.project_vertical = true;
  mgsim::solver::Stepper stepper(cfg, m);
  auto s = stepper.initial_state(f);
  for (auto _ : st) s = stepper.step(s, 1e-3);
}
BENCHMARK(BM_Step);

void BM_BmoNorm(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const mgsim::Grid g{n, n};
  const auto f = mgsim::io::random_bandlimited(g, {1, n / 4, 1.0, 3}, false);
  for (auto _ : st) benchmark::DoNotOptimize(mgsim::diag::bmo_norm(f));
}
BENCHMARK(BM_BmoNorm)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
