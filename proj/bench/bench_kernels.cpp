// Serial reference against OpenMP kernels: exhaustive ground search, shot
// ensembles of the annealer, and circuit-level ensembles.
//
//   ./bench_kernels --benchmark_filter=Brute

#include <benchmark/benchmark.h>

#include "qafactor/annealer.hpp"
#include "qafactor/flux_sim.hpp"
#include "qafactor/multiplier.hpp"

using namespace qaf;

namespace {

const IsingModel& free_2x2() {
  static const IsingModel m = free_problem(build_multiplier(2, 2)).model;
  return m;
}

void BM_BruteSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(brute_force_ground_serial(free_2x2()).e0);
}

void BM_BruteParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(brute_force_ground(free_2x2()).e0);
}

struct Factor15 {
  MultiplierNetwork net = build_multiplier(4, 4);
  ClampedProblem problem = clamp_product(net, 15);
};

RunOptions shot_options(const Factor15& f, int threads) {
  RunOptions o;
  o.shots = 64;
  o.master_seed = 1;
  o.reference_e0 = f.problem.reference_e0;
  o.threads = threads;
  return o;
}

void BM_AnnealSerial(benchmark::State& st) {
  const Factor15 f;
  const RunOptions o = shot_options(f, 1);
  for (auto _ : st) benchmark::DoNotOptimize(run_shots_serial(f.problem.model, Schedule{}, o).ground_hits);
}

void BM_AnnealParallel(benchmark::State& st) {
  const Factor15 f;
  const RunOptions o = shot_options(f, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(run_shots(f.problem.model, Schedule{}, o).ground_hits);
}

flux::RampSpec short_ramp() {
  flux::RampSpec r;
  r.ramp = 0.5e-9;
  return r;
}

void BM_CircuitSerial(benchmark::State& st) {
  const auto layout = flux::logical_to_physical(flux::inverse_nor_model(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(flux::run_ensemble_serial(layout, flux::NoiseSpec{}, short_ramp(), 16, 7).shots);
}

void BM_CircuitParallel(benchmark::State& st) {
  const auto layout = flux::logical_to_physical(flux::inverse_nor_model(0));
  const int threads = static_cast<int>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(flux::run_ensemble(layout, flux::NoiseSpec{}, short_ramp(), 16, 7, threads).shots);
}

}  // namespace

BENCHMARK(BM_BruteSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AnnealSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AnnealParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CircuitSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CircuitParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
