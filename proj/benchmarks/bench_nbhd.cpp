#include <benchmark/benchmark.h>

#include "upl/nbhd.hpp"
#include "upl/stdlib.hpp"

using namespace upl;

static void BM_LeqArrows(benchmark::State& state) {
  const auto& sig = standard_signature();
  NbhdNF a = parse_nbhd("(0 -> S 0) & (S 0 -> S (S 0)) & (S (S 0) -> S (S (S 0)))", sig);
  NbhdNF b = parse_nbhd("(0 -> S !) & (S (S 0) -> S !)", sig);
  for (auto _ : state) benchmark::DoNotOptimize(leq(a, b));
}
BENCHMARK(BM_LeqArrows);

static void BM_Meet(benchmark::State& state) {
  const auto& sig = standard_signature();
  NbhdNF a = parse_nbhd("Pair (S 0) (0 -> 0)", sig);
  NbhdNF b = parse_nbhd("Pair (S !) (S 0 -> 0)", sig);
  for (auto _ : state) benchmark::DoNotOptimize(meet(a, b));
}
BENCHMARK(BM_Meet);

static void BM_Universe(benchmark::State& state) {
  const auto& sig = standard_signature();
  for (auto _ : state) benchmark::DoNotOptimize(nbhd_universe(sig, 3, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Universe)->Arg(48)->Arg(500);

BENCHMARK_MAIN();
