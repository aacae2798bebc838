// Serial reference vs OpenMP kernel for each parallel scan.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "quadshift/dynamics.hpp"
#include "quadshift/effects.hpp"
#include "quadshift/inference.hpp"

using namespace quadshift;

namespace {

constexpr double wQ = 2.0 * std::numbers::pi * 1.7e3;
constexpr double tau = 1.2e-3;

const dynamics::RwaSystem kSystem{wQ, std::numbers::pi / tau, 0.0, 0.0};

inference::NoiseModel noise() { return inference::NoiseModel::from_g_factors(18e-9, 1.2, 2.0025); }

inference::QuadratureOptions single_pass() {
  inference::QuadratureOptions q;
  q.check_convergence = false;
  return q;
}

void BM_scan_spectrum(benchmark::State& state) {
  const auto grid = dynamics::detuning_grid(2.0 * wQ, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::scan_spectrum(kSystem, grid, tau));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_scan_spectrum_serial(benchmark::State& state) {
  const auto grid = dynamics::detuning_grid(2.0 * wQ, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::scan_spectrum_serial(kSystem, grid, tau));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_noise_average(benchmark::State& state) {
  const auto grid = dynamics::detuning_grid(2.0 * wQ, static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(inference::noise_averaged_signal(kSystem, noise(), grid, tau, single_pass()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_noise_average_serial(benchmark::State& state) {
  const auto grid = dynamics::detuning_grid(2.0 * wQ, static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(inference::noise_averaged_signal_serial(kSystem, noise(), grid, tau, single_pass()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

ShiftDecomposition decomposition() {
  ShiftDecomposition d;
  d.a = -0.9e-19;
  d.eta = -0.197;
  return d;
}

void BM_orientation_scan(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(orientation_scan(decomposition(), n, n));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_orientation_scan_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(orientation_scan_serial(decomposition(), n, n));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

}  // namespace

BENCHMARK(BM_scan_spectrum)->Arg(201)->Arg(801)->Arg(3201)->UseRealTime();
BENCHMARK(BM_scan_spectrum_serial)->Arg(201)->Arg(801)->Arg(3201)->UseRealTime();
BENCHMARK(BM_noise_average)->Arg(40)->Arg(801)->UseRealTime();
BENCHMARK(BM_noise_average_serial)->Arg(40)->Arg(801)->UseRealTime();
BENCHMARK(BM_orientation_scan)->Arg(64)->Arg(256)->UseRealTime();
BENCHMARK(BM_orientation_scan_serial)->Arg(64)->Arg(256)->UseRealTime();

BENCHMARK_MAIN();
