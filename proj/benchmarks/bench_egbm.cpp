#include <benchmark/benchmark.h>

#include "egbm/lasso.hpp"
#include "egbm/stump.hpp"
#include "egbm/synthetic.hpp"
#include "egbm/trainer.hpp"

namespace {

using namespace egbm;

void BM_FitStump(benchmark::State& state) {
  const Dataset d = gen_linear(state.range(0), kDefaultNoiseStd, 1);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(fit_stump(d.features.col(0), d.targets, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitStump)->Arg(1000)->Arg(10000);

void BM_LassoFit(benchmark::State& state) {
  const Dataset d = gen_linear(state.range(0), kDefaultNoiseStd, 1);
  const LassoProblem p{d.features, d.targets, 0.01};
  for (auto _ : state) benchmark::DoNotOptimize(lasso_fit(p, 1e-9, 10000));
}
BENCHMARK(BM_LassoFit)->Arg(1000)->Arg(10000);

void BM_LassoCv(benchmark::State& state) {
  const Dataset d = gen_linear(state.range(0), kDefaultNoiseStd, 1);
  const auto grid = lambda_grid(lambda_max(d.features, d.targets), 20);
  for (auto _ : state) benchmark::DoNotOptimize(lasso_cv(d.features, d.targets, 5, grid, 3));
}
BENCHMARK(BM_LassoCv)->Arg(1000);

void BM_Train(benchmark::State& state) {
  const Dataset d = gen_linear(1000, kDefaultNoiseStd, 1);
  TrainConfig c;
  c.iterations = 100;
  c.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train(d, c));
}
BENCHMARK(BM_Train)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
