#include <benchmark/benchmark.h>

#include <vector>

#include "dspp/bell.hpp"
#include "dspp/hazard_models.hpp"
#include "dspp/malliavin.hpp"
#include "dspp/mc_oracle.hpp"
#include "dspp/survival.hpp"

using namespace dspp;

namespace {

void BM_CompleteBellRecurrence(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = 0.5 + 0.1 * i;
  for (auto _ : state) benchmark::DoNotOptimize(bell::complete_bell_recurrence<double>(n, xs));
}
BENCHMARK(BM_CompleteBellRecurrence)->Arg(5)->Arg(12)->Arg(32);

void BM_CompleteBellPartitionSum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> xs(n, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(bell::complete_bell_sum<double>(n, xs));
}
BENCHMARK(BM_CompleteBellPartitionSum)->Arg(5)->Arg(12);

void BM_CompleteBellDeterminant(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> xs(n, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(bell::complete_bell_det<double>(n, xs));
}
BENCHMARK(BM_CompleteBellDeterminant)->Arg(5)->Arg(12);

void BM_SurvivalBellCmy(benchmark::State& state) {
  const CmyModel m{1.0, 2.0, 0.5, TimeKernel::exponential(1.0, 1.0), 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(survival_thm1(m, 0.0, 1.0, 5).probability);
}
BENCHMARK(BM_SurvivalBellCmy);

void BM_SurvivalBellCir(benchmark::State& state) {
  const CirModel m{2.0, 1.0, 0.5, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(survival_thm1(m, 0.0, 1.0, 5).probability);
}
BENCHMARK(BM_SurvivalBellCir);

void BM_SurvivalBellGammaOu(benchmark::State& state) {
  const GammaOuModel m{1.5, 2.0, 3.0, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(survival_thm1(m, 0.0, 1.0, 5).probability);
}
BENCHMARK(BM_SurvivalBellGammaOu);

void BM_SurvivalRecursionKernel(benchmark::State& state) {
  const auto m = make_levy_kernel(TimeKernel::piecewise({0.5}, {1.0, 0.5}), 1.0,
                                  TemperedStableDensity{0.5, 1.0, 0.5}, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(survival_thm2(m, 0.0, 1.0, 5).probability);
}
BENCHMARK(BM_SurvivalRecursionKernel);

void BM_SurvivalBellKernel(benchmark::State& state) {
  const auto m = make_levy_kernel(TimeKernel::piecewise({0.5}, {1.0, 0.5}), 1.0,
                                  TemperedStableDensity{0.5, 1.0, 0.5}, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(survival_thm1(m, 0.0, 1.0, 5).probability);
}
BENCHMARK(BM_SurvivalBellKernel);

void BM_McSurvivalGammaOu(benchmark::State& state) {
  McConfig cfg;
  cfg.n_paths = 100'000;
  cfg.workers = 1;
  const GammaOuModel m{1.5, 2.0, 3.0, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(mc_survival(m, 0.0, 1.0, 3, cfg).mean);
  state.SetItemsProcessed(state.iterations() * cfg.n_paths);
}
BENCHMARK(BM_McSurvivalGammaOu)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
