#include <benchmark/benchmark.h>

#include "bipart/calibration.hpp"
#include "bipart/exact_count.hpp"
#include "bipart/gibbs_model.hpp"

namespace {

using namespace bipart;

template <auto Fn>
void bm_count(benchmark::State& state) {
  const auto ps = state.range(0) == 0 ? PartSet::StrictPositive : PartSet::NonzeroVectors;
  const std::int64_t n1 = state.range(1);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(ps, n1, n1 * n1, kDefaultCellBudget));
}

template <auto Fn>
void bm_lyapunov(benchmark::State& state) {
  const auto n2 = state.range(0);
  const auto n1 = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n2)));
  const ShapeParams p = calibrate({n1, n2}, PartSet::StrictPositive).params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Fn(p, PartSet::StrictPositive, kLyapunovDirections, kLyapunovTol));
  }
}

void bm_draw_many(benchmark::State& state) {
  const ShapeParams p = calibrate({10, 400}, PartSet::StrictPositive).params;
  const BoltzmannSampler sampler({p, PartSet::StrictPositive, 1e-6, 1});
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw_many(static_cast<std::size_t>(state.range(0))));
}

void bm_draw_many_reference(benchmark::State& state) {
  const ShapeParams p = calibrate({10, 400}, PartSet::StrictPositive).params;
  const BoltzmannSampler sampler({p, PartSet::StrictPositive, 1e-6, 1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.draw_many_reference(static_cast<std::size_t>(state.range(0))));
  }
}

}  // namespace

BENCHMARK(bm_count<count_table>)->Name("count_table/openmp")->Args({0, 20})->Args({1, 20})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_count<count_table_reference>)->Name("count_table/serial")->Args({0, 20})->Args({1, 20})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_lyapunov<lyapunov_bound>)->Name("lyapunov/openmp")->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_lyapunov<lyapunov_bound_reference>)->Name("lyapunov/serial")->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_draw_many)->Name("draw_many/openmp")->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_draw_many_reference)->Name("draw_many/serial")->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
