#include <benchmark/benchmark.h>

#include "cfuse/cfusion.hpp"
#include "cfuse/qdual.hpp"
#include "cfuse/random.hpp"

namespace {

cfuse::CFusionFrame frame_of(std::int64_t n, std::int64_t atoms) {
  cfuse::RandomFrameSpec spec;
  spec.seed = 42;
  spec.ambient_dim = {static_cast<int>(n), static_cast<int>(n)};
  spec.atoms = {static_cast<int>(atoms), static_cast<int>(atoms)};
  spec.fiber_dim = {1, static_cast<int>(n)};
  spec.ensure_frame = true;
  return cfuse::generate_random_frame(spec);
}

void BM_FrameOperator(benchmark::State& state) {
  const cfuse::CFusionFrame f = frame_of(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(cfuse::frame_operator(f));
}
BENCHMARK(BM_FrameOperator)->Args({4, 6})->Args({8, 6})->Args({16, 12})->Args({32, 24});

void BM_CanonicalDual(benchmark::State& state) {
  const cfuse::CFusionFrame f = frame_of(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(cfuse::canonical_qdual(f));
}
BENCHMARK(BM_CanonicalDual)->Args({4, 6})->Args({8, 6})->Args({16, 12});

void BM_SolveQ(benchmark::State& state) {
  const cfuse::CFusionFrame f = frame_of(state.range(0), state.range(1));
  const cfuse::CanonicalDual c = cfuse::canonical_qdual(f);
  for (auto _ : state) benchmark::DoNotOptimize(cfuse::solve_q(f, c.dual));
}
BENCHMARK(BM_SolveQ)->Args({2, 3})->Args({4, 4})->Args({6, 6});

void BM_VerifyDuality(benchmark::State& state) {
  const cfuse::CFusionFrame f = frame_of(state.range(0), state.range(1));
  const cfuse::CanonicalDual c = cfuse::canonical_qdual(f);
  for (auto _ : state) benchmark::DoNotOptimize(cfuse::verify_duality(f, c.dual, c.q));
}
BENCHMARK(BM_VerifyDuality)->Args({4, 6})->Args({8, 6});

}  // namespace
BENCHMARK_MAIN();
