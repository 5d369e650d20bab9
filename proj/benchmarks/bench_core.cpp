#include <benchmark/benchmark.h>

#include "squeeze/annulus_map.hpp"
#include "squeeze/ball_geometry.hpp"
#include "squeeze/kobayashi.hpp"
#include "squeeze/squeezing.hpp"

using namespace squeeze;

static void BM_PsiApply(benchmark::State& state) {
  const PointCn z = point({0.3, Complex(0.1, 0.2), -0.4});
  for (auto _ : state) benchmark::DoNotOptimize(psi_apply(0.7, z));
}
BENCHMARK(BM_PsiApply);

static void BM_KobayashiBall(benchmark::State& state) {
  const PointCn z = point({0.3, Complex(0.1, 0.2)}), w = point({-0.5, 0.2});
  for (auto _ : state) benchmark::DoNotOptimize(kobayashi_ball(z, w));
}
BENCHMARK(BM_KobayashiBall);

static void BM_AnnulusMapSolve(benchmark::State& state) {
  const PlanarDomain op = build_omega_prime();
  const auto nodes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(AnnulusMap(op, nodes).modulus());
}
BENCHMARK(BM_AnnulusMapSolve)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_AnnulusMapForward(benchmark::State& state) {
  const AnnulusMap map(build_omega_prime(), 512);
  for (auto _ : state) benchmark::DoNotOptimize(map.forward(Complex(0.15, 0.02)));
}
BENCHMARK(BM_AnnulusMapForward);

static void BM_DistanceUpperDisc(benchmark::State& state) {
  const Domain d = unit_disc();
  for (auto _ : state) benchmark::DoNotOptimize(distance_upper(d, point({0.0}), point({0.9})).value);
}
BENCHMARK(BM_DistanceUpperDisc)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
