#include <benchmark/benchmark.h>

#include "conrap/bench.hpp"
#include "conrap/dual_solver.hpp"
#include "conrap/generators.hpp"
#include "conrap/scalar_minimizer.hpp"

using namespace conrap;

namespace {

// Arguments: family index, n. Generation stays outside the timed loop.
void BM_Solve(benchmark::State& state, Method method) {
  const auto family = all_families()[static_cast<std::size_t>(state.range(0))];
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto inst = generate({family, n, 1, 0.5});
  int iterations = 0;
  for (auto _ : state) {
    const auto r = solve_with(method, inst, {});
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.objective);
  }
  state.SetLabel(std::string(to_string(family)));
  state.counters["iterations"] = iterations;
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_Primary(benchmark::State& state) {
  const auto family = all_families()[static_cast<std::size_t>(state.range(0))];
  BM_Solve(state, primary_method_for(constraint_kind_of(family)));
}

void BM_Baseline(benchmark::State& state) { BM_Solve(state, Method::DualBisectionBaseline); }

void BM_MinimizeLagrangian(benchmark::State& state) {
  const auto family = all_families()[static_cast<std::size_t>(state.range(0))];
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto inst = generate({family, n, 1, 0.5});
  std::vector<double> x;
  for (auto _ : state) {
    minimize_lagrangian(inst, 0.7, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetLabel(std::string(to_string(family)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void families_and_sizes(benchmark::internal::Benchmark* b) {
  for (int f = 0; f < 6; ++f) {
    for (int n : {1000, 100000}) b->Args({f, n});
  }
}

}  // namespace

BENCHMARK(BM_Primary)->Apply(families_and_sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Baseline)->Apply(families_and_sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinimizeLagrangian)->Apply(families_and_sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
