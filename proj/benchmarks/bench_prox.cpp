#include <benchmark/benchmark.h>

#include <random>

#include "nlsreg/prox.hpp"
#include "nlsreg/regularizer.hpp"

using namespace nlsreg;

namespace {

Vector random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

ShiftContext boxed(Index n) {
  return {random_vector(n, 2), TrustRegion{random_vector(n, 3), 0.5}};
}

void BM_ProxL1Box(benchmark::State& state) {
  const Index n = state.range(0);
  const Vector q = 2.0 * random_vector(n, 1);
  const ShiftContext ctx = boxed(n);
  for (auto _ : state) benchmark::DoNotOptimize(prox_l1_box(q, 0.3, ctx));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ProxL1Box)->Range(64, 1 << 16);

void BM_ProxLHalfBox(benchmark::State& state) {
  const Index n = state.range(0);
  const Vector q = 2.0 * random_vector(n, 1);
  const ShiftContext ctx = boxed(n);
  for (auto _ : state) benchmark::DoNotOptimize(prox_lhalf_box(q, 0.3, ctx));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ProxLHalfBox)->Range(64, 1 << 16);

void BM_TrProxL2(benchmark::State& state) {
  const Index d = state.range(0);
  TRProxQuery q;
  q.qbar = 3.0 * random_vector(d, 1);
  q.center = 0.2 * random_vector(d, 2);
  q.radius = 0.4;
  q.nu = 0.7;
  q.lambda = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(tr_prox_l2(q));
}
BENCHMARK(BM_TrProxL2)->RangeMultiplier(4)->Range(2, 512);

void BM_GroupLassoProx(benchmark::State& state) {
  const Index n = 512;
  const Regularizer reg = Regularizer::group_lasso(0.01, contiguous_groups(n, 16));
  const Vector q = random_vector(n, 1);
  ShiftContext ctx{Vector::Zero(n), std::nullopt};
  if (state.range(0)) ctx.region = TrustRegion{Vector::Zero(n), 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(reg.shifted_prox(q, 0.9, ctx));
}
BENCHMARK(BM_GroupLassoProx)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
