#include <benchmark/benchmark.h>

#include <vector>

#include "rdlab/functionals.hpp"
#include "rdlab/pde_solver.hpp"
#include "rdlab/stationary.hpp"
#include "rdlab/threshold.hpp"
#include "rdlab/traveling_wave.hpp"

namespace {

void BM_ImexStep(benchmark::State& state) {
  const auto nodes = static_cast<std::size_t>(state.range(0));
  const rdlab::RadialGrid grid(2, 200.0, nodes);
  const auto spec = rdlab::NonlinearitySpec::nagumo(0.25);
  const rdlab::ImexStepper stepper(spec, grid, 0.01);
  std::vector<double> u = rdlab::make_plateau(0.1, 40.0, grid).values;
  for (auto _ : state) {
    stepper.step(u);
    benchmark::DoNotOptimize(u.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(nodes));
}
BENCHMARK(BM_ImexStep)->Arg(1025)->Arg(4097)->Arg(16385);

void BM_Energy(benchmark::State& state) {
  const rdlab::RadialGrid grid(2, 200.0, 4097);
  const auto spec = rdlab::NonlinearitySpec::nagumo(0.25);
  const auto phi = rdlab::make_plateau(0.1, 40.0, grid);
  for (auto _ : state) benchmark::DoNotOptimize(rdlab::energy(phi, spec));
}
BENCHMARK(BM_Energy);

void BM_Shoot(benchmark::State& state) {
  const auto spec = rdlab::NonlinearitySpec::pure_power(5.0);
  for (auto _ : state) benchmark::DoNotOptimize(rdlab::shoot(spec, 3, 0.5, 200.0).value);
}
BENCHMARK(BM_Shoot)->Unit(benchmark::kMillisecond);

void BM_ComputeWave(benchmark::State& state) {
  const auto spec = rdlab::NonlinearitySpec::nagumo(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(rdlab::compute_wave(spec).c_dagger);
}
BENCHMARK(BM_ComputeWave)->Unit(benchmark::kMillisecond);

void BM_WeightedKernel(benchmark::State& state) {
  const double s = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rdlab::weighted_kernel_scaled(3, s));
}
BENCHMARK(BM_WeightedKernel)->Arg(0)->Arg(10)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
