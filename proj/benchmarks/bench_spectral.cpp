#include <benchmark/benchmark.h>

#include <numbers>

#include "cqmq/spectral.hpp"

namespace {

using namespace cqmq;

void BM_AssembleSphere(benchmark::State& state) {
  const auto chart = MetricChart::sphere(1.0);
  const int n = static_cast<int>(state.range(0));
  const Grid grid(chart, {n, 2 * n});
  for (auto _ : state) benchmark::DoNotOptimize(assemble_hamiltonian(chart, GaugePotential::zero(2), grid, 0.0));
  state.counters["nodes"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_AssembleSphere)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EigenTorus(benchmark::State& state) {
  const auto chart = MetricChart::flat_torus(2 * std::numbers::pi, 2 * std::numbers::pi);
  const int n = static_cast<int>(state.range(0));
  const auto h = assemble_hamiltonian(chart, GaugePotential::zero(2), Grid(chart, {n, n}), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(eigen_spectrum(h, 5));
  state.counters["nodes"] = static_cast<double>(n * n);
}
BENCHMARK(BM_EigenTorus)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EigenSphere(benchmark::State& state) {
  const auto chart = MetricChart::sphere(1.0);
  const int n = static_cast<int>(state.range(0));
  const auto h = assemble_hamiltonian(chart, GaugePotential::zero(2), Grid(chart, {n, 2 * n}), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(eigen_spectrum(h, 9));
}
BENCHMARK(BM_EigenSphere)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
