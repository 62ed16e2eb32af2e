#include <benchmark/benchmark.h>

#include "symdyn/codec.hpp"
#include "symdyn/markers.hpp"
#include "symdyn/perturb_dbar.hpp"
#include "symdyn/pipeline.hpp"
#include "symdyn/quasitiling.hpp"

using namespace symdyn;

namespace {

void BM_EmpiricalTables(benchmark::State& state) {
  const Group g = Group::parse("z");
  Rng rng(1);
  const Configuration c = SourceSpec::bernoulli({0.5, 0.5}).sample(Window::cube(g, state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(EmpiricalMeasure::from_configuration(c, 6));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmpiricalTables)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);

void BM_Quasitiling(benchmark::State& state) {
  const Group g = Group::parse("z2");
  TilingParams p;
  p.eta = 0.1;
  p.K = 3;
  p.seed = 7;
  const Window w = Window::cube(g, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(construct_quasitiling(w, p));
}
BENCHMARK(BM_Quasitiling)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_MarkerScan(benchmark::State& state) {
  const Group g = Group::parse("z");
  const MarkerSet m = construct_markers(4, 0.05, 3, g);
  Rng rng(2);
  const Configuration c = SourceSpec::bernoulli({1.0 / 3, 1.0 / 3, 1.0 / 3}).sample(Window::cube(g, 1 << 16), rng);
  for (auto _ : state) benchmark::DoNotOptimize(find_marker_occurrences(c, m));
  state.SetItemsProcessed(state.iterations() * (1 << 16));
}
BENCHMARK(BM_MarkerScan);

void BM_CountingBound(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(counting_bound_check(static_cast<std::uint64_t>(state.range(0)), 9, 4, 3, 0.15));
}
BENCHMARK(BM_CountingBound)->Arg(100)->Arg(1000)->Arg(10000);

void BM_Dbar(benchmark::State& state) {
  const Group g = Group::parse("z");
  const int n = static_cast<int>(state.range(0));
  Rng r1(3), r2(4);
  const Window w = Window::cube(g, 10000);
  const auto a = EmpiricalMeasure::from_configuration(SourceSpec::bernoulli({0.5, 0.5}).sample(w, r1), n);
  const auto b = EmpiricalMeasure::from_configuration(SourceSpec::bernoulli({0.4, 0.6}).sample(w, r2), n);
  for (auto _ : state) benchmark::DoNotOptimize(dbar_estimate(a, b, n));
}
BENCHMARK(BM_Dbar)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  ExperimentConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(cfg));
}
BENCHMARK(BM_Pipeline)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
