#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "locklab/dynamics.hpp"
#include "locklab/locking.hpp"
#include "locklab/parallel.hpp"

namespace {

std::vector<double> random_values(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

void BM_PairwiseSerial(benchmark::State& state) {
  const auto v = random_values(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        locklab::pairwise_sum_serial(v.size(), [&](std::size_t i) { return std::sqrt(1.0 - 0.5 * v[i] * v[i]); }));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PairwiseParallel(benchmark::State& state) {
  const auto v = random_values(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        locklab::pairwise_sum(v.size(), [&](std::size_t i) { return std::sqrt(1.0 - 0.5 * v[i] * v[i]); }));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LockMargin(benchmark::State& state) {
  const auto nu = locklab::NormalizedFrequencies::evenly_spaced(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(locklab::lock_margin(nu, 0.999));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ThresholdExact(benchmark::State& state) {
  const locklab::FrequencySpec spec{locklab::FrequencyRule::midpoint(), state.range(0), 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(locklab::locking_threshold_exact(spec).gamma_l);
}

void BM_FieldMeanField(benchmark::State& state) {
  const auto phases = random_values(static_cast<std::size_t>(state.range(0)));
  locklab::dynamics::KuramotoField field(random_values(phases.size()));
  std::vector<double> rates(phases.size());
  for (auto _ : state) {
    field(phases, rates);
    benchmark::DoNotOptimize(rates.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FieldDirect(benchmark::State& state) {
  const auto phases = random_values(static_cast<std::size_t>(state.range(0)));
  const auto omegas = random_values(phases.size());
  for (auto _ : state) benchmark::DoNotOptimize(locklab::dynamics::vector_field_direct(phases, omegas));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_PairwiseSerial)->RangeMultiplier(16)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_PairwiseParallel)->RangeMultiplier(16)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_LockMargin)->RangeMultiplier(16)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_ThresholdExact)->RangeMultiplier(100)->Range(100, 1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FieldMeanField)->RangeMultiplier(8)->Range(16, 1 << 15);
BENCHMARK(BM_FieldDirect)->RangeMultiplier(8)->Range(16, 1 << 12);

BENCHMARK_MAIN();
