#include <benchmark/benchmark.h>

#include "amo/contour.hpp"
#include "amo/discriminant.hpp"
#include "amo/spectrum.hpp"
#include "amo/trigsums.hpp"
#include "amo/verify.hpp"
#include "butterfly.hpp"

using namespace amo;

static void BM_Sigma(benchmark::State& state) {
  const std::int64_t q = state.range(0);
  Discriminant d(1, q);
  double E = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.sigma(E));
    E += 1e-9;
  }
  state.SetComplexityN(q);
}
BENCHMARK(BM_Sigma)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

static void BM_SigmaMp(benchmark::State& state) {
  Discriminant d(97, 301);
  for (auto _ : state) benchmark::DoNotOptimize(d.sigma_mp(0.3, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SigmaMp)->Arg(40)->Arg(160);

static void BM_BandCenters(benchmark::State& state) {
  const std::int64_t q = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(band_centers(2, q));
  state.SetComplexityN(q);
}
BENCHMARK(BM_BandCenters)->Arg(51)->Arg(201)->Arg(801)->Complexity();

static void BM_ExtractDouble(benchmark::State& state) {
  SpectrumOptions opts;
  opts.precision = Precision::Double;
  for (auto _ : state) benchmark::DoNotOptimize(extract_band_structure(93, static_cast<std::int64_t>(state.range(0)), opts));
}
BENCHMARK(BM_ExtractDouble)->Arg(199)->Arg(301)->Unit(benchmark::kMillisecond);

// tiny gaps between nearly coincident bands force MPFR refinement
static void BM_ExtractClustered(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(extract_band_structure(state.range(0), state.range(1)));
}
BENCHMARK(BM_ExtractClustered)->Args({2, 67})->Args({4, 301})->Args({297, 299})->Unit(benchmark::kMillisecond);

static void BM_SigmaPrime0(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sigma_prime0(201, state.range(0)));
}
BENCHMARK(BM_SigmaPrime0)->Arg(301)->Arg(1001);

static void BM_LFormula(benchmark::State& state) {
  const SumContext ctx(201, 301, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(L_formula(ctx));
}
BENCHMARK(BM_LFormula)->Arg(0)->Arg(75);

static void BM_Digamma(benchmark::State& state) {
  double x = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(digamma(x));
    x = x < 2.0 ? x + 1e-3 : 1.0;
  }
}
BENCHMARK(BM_Digamma);

static void BM_IIntegral(benchmark::State& state) {
  QuadratureConfig cfg;
  cfg.tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(I_integral(make_fraction(2, 5), 0.7, cfg));
}
BENCHMARK(BM_IIntegral)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_Recursion(benchmark::State& state) {
  const ContinuedFraction cf{{1, 2, 100}};
  for (auto _ : state) benchmark::DoNotOptimize(recursion_check(cf, 5));
}
BENCHMARK(BM_Recursion)->Unit(benchmark::kMillisecond);

static void BM_SuiteAll(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_suite(Suite::All, 201, 301));
}
BENCHMARK(BM_SuiteAll)->Unit(benchmark::kMillisecond);

static void BM_Butterfly(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tools::butterfly_rows(state.range(0), 1));
}
BENCHMARK(BM_Butterfly)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
