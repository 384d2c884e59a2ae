#include <benchmark/benchmark.h>

#include "cwb/ceval.hpp"
#include "cwb/cformula.hpp"
#include "cwb/efgames.hpp"
#include "cwb/fo.hpp"
#include "cwb/saturation.hpp"

namespace {

cwb::Exec mode(const benchmark::State& s) { return s.range(0) ? cwb::Exec::Parallel : cwb::Exec::Serial; }

void BM_FiniteOrderTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cwb::ef::finite_order_table(24, 4, mode(state)));
}
BENCHMARK(BM_FiniteOrderTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FoEvalCorpus(benchmark::State& state) {
  const auto corpus = cwb::generate_sentences(400, 3, 7);
  const cwb::FiniteBoolAlg b(4);
  for (auto _ : state) benchmark::DoNotOptimize(cwb::fo_eval_corpus(corpus, b, mode(state)));
}
BENCHMARK(BM_FoEvalCorpus)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CevalBall(benchmark::State& state) {
  // sup over the unit ball of ||x - x*||, two points.
  const auto x = cwb::CTerm::variable("x");
  const auto phi = cwb::CFormula::sup("x", cwb::Sort::Ball, cwb::CFormula::norm(cwb::CTerm::sub(x, cwb::CTerm::star(x))));
  for (auto _ : state) benchmark::DoNotOptimize(cwb::ceval(phi, cwb::CStarAlgebraFin{2}, {}, 1e-2, mode(state)));
}
BENCHMARK(BM_CevalBall)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RealizeOrthogonality(benchmark::State& state) {
  const auto conds = cwb::orthogonality_type(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cwb::realize_type(conds, cwb::CStarAlgebraFin{4}, 1e-6, mode(state)));
  }
}
BENCHMARK(BM_RealizeOrthogonality)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
