#include <benchmark/benchmark.h>

#include "modspec/harper.hpp"

namespace {

void BM_FieldSerial(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(modspec::serial::harper_field(1, 5, grid));
}

void BM_FieldParallel(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(modspec::harper_field(1, 5, grid));
}

void BM_BandsSerial(benchmark::State& state) {
  const auto field = modspec::harper_field(1, 5, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(modspec::serial::band_functions(field));
}

void BM_BandsParallel(benchmark::State& state) {
  const auto field = modspec::harper_field(1, 5, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(modspec::band_functions(field));
}

void BM_ReportSerial(benchmark::State& state) {
  const auto field = modspec::harper_field(1, 5, static_cast<int>(state.range(0)));
  const auto bands = modspec::band_functions(field);
  for (auto _ : state) benchmark::DoNotOptimize(modspec::serial::selection_report(field, bands));
}

void BM_ReportParallel(benchmark::State& state) {
  const auto field = modspec::harper_field(1, 5, static_cast<int>(state.range(0)));
  const auto bands = modspec::band_functions(field);
  for (auto _ : state) benchmark::DoNotOptimize(modspec::selection_report(field, bands));
}

void BM_ButterflySerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(modspec::serial::butterfly(static_cast<int>(state.range(0)), 16));
}

void BM_ButterflyParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(modspec::butterfly(static_cast<int>(state.range(0)), 16));
}

}  // namespace

BENCHMARK(BM_FieldSerial)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FieldParallel)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BandsSerial)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BandsParallel)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReportSerial)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReportParallel)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ButterflySerial)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ButterflyParallel)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
