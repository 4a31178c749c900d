#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cqmq/corpus.hpp"
#include "cqmq/expression.hpp"
#include "cqmq/geometry.hpp"
#include "cqmq/operators.hpp"

namespace {

using namespace cqmq;

void BM_JetProduct(benchmark::State& state) {
  const int vars = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  auto a = exp(RealJet::variable(vars, order, 0, 0.3));
  auto b = sin(RealJet::variable(vars, order, vars - 1, 0.7));
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
  state.counters["coeffs"] = static_cast<double>(a.size());
}
BENCHMARK(BM_JetProduct)->Args({2, 4})->Args({3, 4})->Args({3, 6});

void BM_EvalJet(benchmark::State& state) {
  ParseOptions o;
  o.dimension = 3;
  const auto e = parse("(1 + 0.1*sin(x1)*cos(x2 - x3))*exp(0.05*cos(2*x3))", o);
  const double p[] = {0.3, 1.1, -0.4};
  for (auto _ : state) benchmark::DoNotOptimize(eval_jet(e, p, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EvalJet)->DenseRange(2, 5);

void BM_ScalarCurvature(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int dim = static_cast<int>(state.range(0));
  const auto m = random_metric(dim, rng, "bench");
  const std::vector<double> p(static_cast<std::size_t>(dim), 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(scalar_curvature(m, p));
}
BENCHMARK(BM_ScalarCurvature)->Arg(2)->Arg(3);

void BM_EnergyGq(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const int dim = static_cast<int>(state.range(0));
  const auto m = random_metric(dim, rng, "bench");
  const auto a = random_gauge(dim, rng);
  const auto s = random_section(dim, rng);
  const std::vector<double> p(static_cast<std::size_t>(dim), 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(energy_operator_gq(s, a, m, p));
}
BENCHMARK(BM_EnergyGq)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

}  // namespace
