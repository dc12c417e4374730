// Serial reference sweep against the trial-parallel OpenMP sweep.

#include <benchmark/benchmark.h>

#include "blockham/harness.hpp"

namespace {

blockham::ExperimentConfig bench_config() {
  blockham::ExperimentConfig cfg;
  cfg.sizes = {300, 300};
  cfg.window = {-1.0, 0.0, 1.0, 2.0};
  cfg.trials = 16;
  cfg.seed = 11;
  return cfg;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto cfg = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(blockham::run_sweep_serial(cfg));
}

void BM_SweepOpenMP(benchmark::State& state) {
  auto cfg = bench_config();
  cfg.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(blockham::run_sweep(cfg));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepOpenMP)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
