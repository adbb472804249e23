#include <benchmark/benchmark.h>

#include <vector>

#include "manes/calibration.hpp"
#include "manes/dynamics.hpp"
#include "manes/gm_potential.hpp"
#include "manes/hetero_market.hpp"
#include "manes/mean_field.hpp"
#include "manes/nes_params.hpp"

namespace {

manes::NesParams fig(double h) {
  manes::NesParams p;
  p.mu1 = 0.4;
  p.mu2 = -0.4;
  p.sigma1 = p.sigma2 = 0.1;
  p.a = 0.5;
  p.T = 1.0;
  p.h = h;
  return p;
}

void BM_PotentialDeriv(benchmark::State& state) {
  const manes::NesParams p = fig(0.2);
  double y = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(manes::potential_deriv(p, y));
    y = y < 1.0 ? y + 1e-4 : -1.0;
  }
}
BENCHMARK(BM_PotentialDeriv);

void BM_LogPartition(benchmark::State& state) {
  const manes::NesParams p = fig(0.15);
  double m = -0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(manes::log_partition(p, 0.2, m));
    m = m < 0.5 ? m + 1e-4 : -0.5;
  }
}
BENCHMARK(BM_LogPartition);

void BM_SolveSelfConsistency(benchmark::State& state) {
  const manes::NesParams p = fig(0.15);
  for (auto _ : state)
    benchmark::DoNotOptimize(manes::solve_self_consistency(p, 0.2));
}
BENCHMARK(BM_SolveSelfConsistency);

void BM_LinearResponse(benchmark::State& state) {
  manes::HeterogeneousMarket mkt;
  mkt.g = 0.2;
  mkt.h = 0.35;
  mkt.T = 1.0;
  const int n = static_cast<int>(state.range(0));
  for (int i = 0; i < n; ++i) {
    manes::AssetParams a;
    a.mu = 0.2 + 0.2 * i / n;
    a.sigma = 0.1 + 0.1 * i / n;
    mkt.assets.push_back(a);
  }
  for (auto _ : state) benchmark::DoNotOptimize(manes::linear_response(mkt));
}
BENCHMARK(BM_LinearResponse)->Arg(100)->Arg(500);

void BM_SimulateParticles(benchmark::State& state) {
  const manes::NesParams p = fig(0.35);
  manes::SimConfig sc;
  sc.n_particles = 200;
  sc.steps = 1000;
  sc.burn_in = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(manes::simulate_particles(p, 0.2, sc));
}
BENCHMARK(BM_SimulateParticles);

void BM_PriceEuropean(benchmark::State& state) {
  const manes::NesParams p = fig(0.2);
  double k = 60.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        manes::price_european(p, 100.0, 0.01, k, manes::OptionType::Call));
    k = k < 140.0 ? k + 0.01 : 60.0;
  }
}
BENCHMARK(BM_PriceEuropean);

}  // namespace

BENCHMARK_MAIN();
