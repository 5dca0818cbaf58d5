#include <benchmark/benchmark.h>

#include <cmath>

#include "loggas/equilibrium.hpp"
#include "loggas/gibbs.hpp"
#include "loggas/inertia.hpp"
#include "loggas/master.hpp"
#include "loggas/quadrature.hpp"
#include "loggas/sampler.hpp"

namespace {

void BM_DensityDirect(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(loggas::equilibrium_density(4.0, x));
    x = x > 0.99 ? -0.99 : x + 0.0137;
  }
}
BENCHMARK(BM_DensityDirect);

void BM_DensityCached(benchmark::State& state) {
  const loggas::EquilibriumMeasure mu(4.0);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mu.density_cached(x));
    x = x > 0.99 ? -0.99 : x + 0.0137;
  }
}
BENCHMARK(BM_DensityCached);

void BM_EquilibriumEnergy(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(loggas::equilibrium_energy(4.0, 1e-6));
}
BENCHMARK(BM_EquilibriumEnergy)->Unit(benchmark::kMillisecond);

void BM_MasterResidual(benchmark::State& state) {
  const loggas::MasterSolution ms(4.0);
  double x = -0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ms.master_residual(x));
    x = x > 0.9 ? -0.9 : x + 0.113;
  }
}
BENCHMARK(BM_MasterResidual)->Unit(benchmark::kMicrosecond);

void BM_LogPartitionQuadrature(benchmark::State& state) {
  const loggas::GibbsTarget target(1, 1.0, 0.0, static_cast<int>(state.range(0)), 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(loggas::log_partition_quadrature(target, 1e-9).value);
}
BENCHMARK(BM_LogPartitionQuadrature)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_McmcSweeps(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const loggas::GibbsTarget target(1, 1.0, 0.0, n, 4.0);
  constexpr std::size_t kSweeps = 2000;
  for (auto _ : state) {
    loggas::RngStream stream(1, 0);
    benchmark::DoNotOptimize(loggas::mcmc_sample(target, stream, kSweeps, kSweeps / 4).acceptance);
  }
  state.SetItemsProcessed(state.iterations() * kSweeps);
}
BENCHMARK(BM_McmcSweeps)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ConditionalTail(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const loggas::GibbsTarget target(1, 1.0, 0.0, n, 4.0);
  loggas::RngStream stream(3, 0);
  const auto batch = loggas::mcmc_sample(target, stream, 500, 400, {}, {}, 100);
  std::vector<double> x(batch.configurations.front().begin(), batch.configurations.front().begin() + n);
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(loggas::conditional_tail(target, x, i, 1.2));
    i = (i + 1) % n;
  }
}
BENCHMARK(BM_ConditionalTail)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_BallOracle(benchmark::State& state) {
  loggas::RngStream stream(5, 0);
  for (auto _ : state) benchmark::DoNotOptimize(loggas::ball_oracle(static_cast<int>(state.range(0)), 3.0, stream, 10000).i2);
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_BallOracle)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
