// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "catsynth/optimizer.hpp"

using namespace catsynth;

static void BM_DisplacementSerial(benchmark::State& state) {
  const auto cutoff = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(displacement_matrix_serial(Complex(1.3, -0.8), cutoff));
}
static void BM_DisplacementParallel(benchmark::State& state) {
  const auto cutoff = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(displacement_matrix(Complex(1.3, -0.8), cutoff));
}
BENCHMARK(BM_DisplacementSerial)->Arg(40)->Arg(120)->Arg(360);
BENCHMARK(BM_DisplacementParallel)->Arg(40)->Arg(120)->Arg(360);

static TwoModeAmplitudes joint(std::size_t dim) {
  const FockVector a = coherent_vector(Complex(1.5, 0.4), dim / 2);
  return TwoModeAmplitudes::product(a, FockVector::basis(dim / 4, dim / 4), dim);
}

static void BM_BeamSplitterSerial(benchmark::State& state) {
  const auto in = joint(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(apply_beam_splitter_serial(in, 0.7));
}
static void BM_BeamSplitterParallel(benchmark::State& state) {
  const auto in = joint(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(apply_beam_splitter(in, 0.7));
}
BENCHMARK(BM_BeamSplitterSerial)->Arg(60)->Arg(160);
BENCHMARK(BM_BeamSplitterParallel)->Arg(60)->Arg(160);

// state.range(0): optimizer threads, 0 for the OpenMP default
static void BM_Optimize(benchmark::State& state) {
  SchemeConfig c;
  c.input = InputSpec::fock(3);
  c.aux_photons = {3, 3};
  const SearchSpace space = SearchSpace::all_free(c);
  OptimizerBudget b;
  b.restarts = 8;
  b.max_evaluations = 600;
  b.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(optimize(space, CatSpec(2.0, Parity::Even), b));
}
BENCHMARK(BM_Optimize)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
