// Parallel kernels against their serial references.

#include <algorithm>
#include <benchmark/benchmark.h>

#include "invlab/harness.hpp"

namespace {

using namespace invlab;

struct Problem {
  ForwardSetup setup = make_forward_setup(100);
  ComplexField c = preset_potential(Preset::bump, 0.1, setup.grid, setup.mask);
  DtnMap map{setup, 8.0, 2, c};
  FrequencyGrid freq = frequency_grid(8.0, 3.0, 6, 8);
  Grid coarse = build_grid(90);
};

Problem& problem() {
  static Problem p;
  return p;
}

void BM_SolveSingleColumns(benchmark::State& state) {
  const auto& op = problem().map.op();
  const int width = static_cast<int>(state.range(0));
  const std::vector<complex> rhs(op.unknowns(), complex(1.0, 0.5));
  std::vector<complex> col(rhs.size());
  for (auto _ : state) {
    for (int j = 0; j < width; ++j) {
      std::copy(rhs.begin(), rhs.end(), col.begin());
      op.solve_block(col, 1);
      benchmark::DoNotOptimize(col.data());
    }
  }
  state.SetItemsProcessed(state.iterations() * width);
}
BENCHMARK(BM_SolveSingleColumns)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SolveBlock(benchmark::State& state) {
  const auto& op = problem().map.op();
  const int width = static_cast<int>(state.range(0));
  const std::vector<complex> rhs(op.unknowns() * width, complex(1.0, 0.5));
  std::vector<complex> block(rhs.size());
  for (auto _ : state) {
    std::copy(rhs.begin(), rhs.end(), block.begin());
    op.solve_block(block, width);
    benchmark::DoNotOptimize(block.data());
  }
  state.SetItemsProcessed(state.iterations() * width);
}
BENCHMARK(BM_SolveBlock)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SampleTableReference(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_table_reference(problem().map, Algorithm::alg1, problem().freq));
}
BENCHMARK(BM_SampleTableReference)->Unit(benchmark::kMillisecond);

void BM_SampleTable(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_table(problem().map, Algorithm::alg1, problem().freq));
}
BENCHMARK(BM_SampleTable)->Unit(benchmark::kMillisecond);

FourierTable& oracle_values() {
  static FourierTable t = oracle_table(problem().c, frequency_grid(10.0, 3.0, 60, 64),
                                       Algorithm::alg1, 10.0, 2);
  return t;
}

void BM_SynthesizeReference(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(synthesize_reference(oracle_values(), problem().coarse));
}
BENCHMARK(BM_SynthesizeReference)->Unit(benchmark::kMillisecond);

void BM_Synthesize(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(oracle_values(), problem().coarse));
}
BENCHMARK(BM_Synthesize)->Unit(benchmark::kMillisecond);

void BM_OracleTableReference(benchmark::State& state) {
  const FrequencyGrid g = frequency_grid(10.0, 3.0, 10, 16);
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle_table_reference(problem().c, g, Algorithm::alg1, 10.0, 2));
}
BENCHMARK(BM_OracleTableReference)->Unit(benchmark::kMillisecond);

void BM_OracleTable(benchmark::State& state) {
  const FrequencyGrid g = frequency_grid(10.0, 3.0, 10, 16);
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle_table(problem().c, g, Algorithm::alg1, 10.0, 2));
}
BENCHMARK(BM_OracleTable)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
