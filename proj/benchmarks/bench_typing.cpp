#include <benchmark/benchmark.h>

#include "upl/parser.hpp"
#include "upl/semantics.hpp"
#include "upl/stdlib.hpp"
#include "upl/typing.hpp"

using namespace upl;

static void BM_Infer(benchmark::State& state) {
  const auto& sig = standard_signature();
  Term t = parse_term("Rec 0 (\\n. \\r. S r) (S 0)", sig);
  int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(infer(sig, {}, t, depth));
}
BENCHMARK(BM_Infer)->Arg(2)->Arg(3)->Arg(4);

static void BM_CheckLambda(benchmark::State& state) {
  const auto& sig = standard_signature();
  Term t = parse_term("\\f. \\x. f (f x)", sig);
  NbhdNF u = parse_nbhd("((0 -> S 0) & (S 0 -> S (S 0))) -> 0 -> S (S 0)", sig);
  for (auto _ : state) benchmark::DoNotOptimize(check_type(sig, {}, t, u, 3));
}
BENCHMARK(BM_CheckLambda);

static void BM_Certify(benchmark::State& state) {
  const auto& sig = standard_signature();
  Term t = parse_term("less (S 0) (S (S 0))", sig);
  for (auto _ : state) benchmark::DoNotOptimize(certify_sn(sig, t, 3));
}
BENCHMARK(BM_Certify);

BENCHMARK_MAIN();
