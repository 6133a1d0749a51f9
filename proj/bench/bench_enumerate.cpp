// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include "pwl/constructions.hpp"
#include "pwl/regions.hpp"
#include "pwl/rng.hpp"

using namespace pwl;

namespace {

Network random_net(int width) {
  Rng rng(42);
  return random_network(2, {width, width, width}, rng);
}

void BM_EnumerateParallel(benchmark::State& state) {
  const Network net = random_net(static_cast<int>(state.range(0)));
  FeasibilityConfig cfg;
  std::size_t cells = 0;
  for (auto _ : state) cells = enumerate_regions(net, cfg).cell_count();
  state.counters["cells"] = static_cast<double>(cells);
}

void BM_EnumerateSerial(benchmark::State& state) {
  const Network net = random_net(static_cast<int>(state.range(0)));
  FeasibilityConfig cfg;
  const Box box = Box::symmetric(2, cfg.box_halfwidth);
  std::size_t cells = 0;
  for (auto _ : state) cells = enumerate_regions_serial(net, box, cfg).cell_count();
  state.counters["cells"] = static_cast<double>(cells);
}

void BM_FoldingParallel(benchmark::State& state) {
  const Network net = build_folding_rectifier_net(2, {6, 6, 6}).net;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_regions(net).cell_count());
}

void BM_FoldingSerial(benchmark::State& state) {
  const Network net = build_folding_rectifier_net(2, {6, 6, 6}).net;
  FeasibilityConfig cfg;
  const Box box = Box::symmetric(2, cfg.box_halfwidth);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_regions_serial(net, box, cfg).cell_count());
}

void BM_PatternGridParallel(benchmark::State& state) {
  const Network net = random_net(6);
  const auto res = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(oracle_count_patterns_by_grid(net, Box::symmetric(2, 3), res));
}

void BM_PatternGridSerial(benchmark::State& state) {
  const Network net = random_net(6);
  const auto res = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle_count_patterns_by_grid_serial(net, Box::symmetric(2, 3), res));
}

}  // namespace

BENCHMARK(BM_EnumerateParallel)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EnumerateSerial)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FoldingParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FoldingSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PatternGridParallel)->Arg(401)->Arg(1001)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PatternGridSerial)->Arg(401)->Arg(1001)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
