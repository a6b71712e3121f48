#include <benchmark/benchmark.h>

#include "acx/forms.hpp"
#include "acx/operators.hpp"
#include "acx/verifier.hpp"

namespace {

void BM_PolyProduct(benchmark::State& state) {
  acx::FormRng rng(1);
  const int degree = static_cast<int>(state.range(0));
  const acx::PolyScalar a = rng.poly(4, degree);
  const acx::PolyScalar b = rng.poly(4, degree);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
  state.counters["terms"] = static_cast<double>(a.size() * b.size());
}
BENCHMARK(BM_PolyProduct)->Arg(2)->Arg(4)->Arg(6);

void BM_Wedge(benchmark::State& state) {
  const auto chart = acx::chart_from_name("twisted:2");
  acx::FormRng rng(2);
  const acx::ScalarForm a = acx::random_scalar_form(chart, 1, 3, rng);
  const acx::ScalarForm b = acx::random_scalar_form(chart, 2, 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(acx::wedge(a, b));
}
BENCHMARK(BM_Wedge);

void BM_FroelicherNijenhuis(benchmark::State& state) {
  const auto chart = acx::chart_from_name("twisted:2");
  const auto phi = acx::random_form(chart, {0, 1}, acx::ValueSide::kHolomorphic, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(acx::fn_bracket(phi, phi));
}
BENCHMARK(BM_FroelicherNijenhuis)->Unit(benchmark::kMillisecond);

void BM_ConjugatedConnectionCheck(benchmark::State& state) {
  acx::IdentityCheck check;
  check.id = "T3.8.1";
  check.chart = state.range(0) == 0 ? "standard:2" : "twisted:2";
  for (auto _ : state) benchmark::DoNotOptimize(acx::check_identity(check));
}
BENCHMARK(BM_ConjugatedConnectionCheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
