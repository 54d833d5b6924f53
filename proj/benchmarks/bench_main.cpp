#include <benchmark/benchmark.h>

#include <vector>

#include "voltarget/index_engine.hpp"
#include "voltarget/market.hpp"
#include "voltarget/montecarlo.hpp"
#include "voltarget/multipliers.hpp"
#include "voltarget/rng.hpp"

namespace {

using namespace voltarget;

void BM_ComputeU(benchmark::State& state) {
  const LambdaParam lambda(static_cast<double>(state.range(0)) / 1000.0);
  for (auto _ : state) benchmark::DoNotOptimize(compute_U(lambda).value);
}
BENCHMARK(BM_ComputeU)->Arg(500)->Arg(900)->Arg(990)->Arg(999);

void BM_ComputeV(benchmark::State& state) {
  const LambdaParam lambda(static_cast<double>(state.range(0)) / 1000.0);
  for (auto _ : state) benchmark::DoNotOptimize(compute_V(lambda).value);
}
BENCHMARK(BM_ComputeV)->Arg(500)->Arg(900)->Arg(990)->Arg(999);

void BM_QGammaHalf(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(q_gamma(0.5, 0.81));
}
BENCHMARK(BM_QGammaHalf);

void BM_FillNormal(benchmark::State& state) {
  std::vector<double> out(static_cast<std::size_t>(state.range(0)));
  RngStream stream{42, 7};
  for (auto _ : state) {
    stream.fill_normal(out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FillNormal)->Arg(2000);

void BM_RunPath(benchmark::State& state) {
  const auto market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  const GridSpec grid{1.0, static_cast<int>(state.range(0))};
  const IndexConfig config;
  const auto schedule = segment_schedule(market, grid);
  std::vector<double> z(static_cast<std::size_t>(grid.N));
  RngStream{1, 0}.fill_normal(z);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_path(schedule, config, grid.dt(), z).log_cont);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunPath)->Arg(2000);

void BM_RunBatch(benchmark::State& state) {
  const auto market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  const IndexConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch(market, config, GridSpec{1.0, 2000}, 256, 1, 1).log_cont.data());
  }
}
BENCHMARK(BM_RunBatch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
