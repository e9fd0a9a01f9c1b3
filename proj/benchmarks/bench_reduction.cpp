#include <benchmark/benchmark.h>

#include "upl/parser.hpp"
#include "upl/reduction.hpp"
#include "upl/stdlib.hpp"

using namespace upl;

static void BM_NormalizeLess(benchmark::State& state) {
  const auto& sig = standard_signature();
  int k = static_cast<int>(state.range(0));
  Term t = Term::app(Term::constant("less"), {numeral(k), numeral(k + 1)});
  for (auto _ : state) benchmark::DoNotOptimize(normalize(t, sig, 100000));
}
BENCHMARK(BM_NormalizeLess)->Arg(4)->Arg(16);

static void BM_CheckSn(benchmark::State& state) {
  const auto& sig = standard_signature();
  Term t = parse_term("(\\x. Pair x x) ((\\y. S y) ((\\z. z) 0))", sig);
  for (auto _ : state) benchmark::DoNotOptimize(check_sn(t, sig, 10000));
}
BENCHMARK(BM_CheckSn);

static void BM_Get(benchmark::State& state) {
  std::vector<Term> elems{numeral(1), numeral(2), numeral(3), numeral(4)};
  for (auto _ : state) benchmark::DoNotOptimize(regression_get(4, 1, elems));
}
BENCHMARK(BM_Get);

BENCHMARK_MAIN();
