#include <benchmark/benchmark.h>

#include "catmap/quantizer.hpp"
#include "catmap/spectral.hpp"
#include "catmap/theta.hpp"
#include "catmap/trace_formula.hpp"

using namespace catmap;

namespace {

const IntegerSymplecticMatrix kCat = IntegerSymplecticMatrix::sl2(2, 1, 1, 1);

void BM_QuantizeLaw(benchmark::State& state) {
  const std::int64_t N = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(quantize(kCat, N));
}
BENCHMARK(BM_QuantizeLaw)->RangeMultiplier(2)->Range(16, 512)->Unit(benchmark::kMillisecond);

void BM_QuantizeWord(benchmark::State& state) {
  QuantizeOptions o;
  o.path = QuantizeOptions::Path::kGeneratorWord;
  const std::int64_t N = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(quantize(kCat, N, o));
}
BENCHMARK(BM_QuantizeWord)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

void BM_EigUnitary(benchmark::State& state) {
  const QuantizedMap q = quantize(kCat, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eig_unitary(q.U));
}
BENCHMARK(BM_EigUnitary)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

void BM_TraceFormula(benchmark::State& state) {
  // |det(I - g)| = |2 - tr g| cosets
  const auto g = IntegerSymplecticMatrix::sl2(state.range(0), 1, -1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(trace_theorem_E(g, 97));
}
BENCHMARK(BM_TraceFormula)->Arg(5)->Arg(50)->Arg(500)->Arg(5000);

void BM_ThetaGram(benchmark::State& state) {
  const Complex tau(0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(theta_gram(tau, tau, state.range(0)));
}
BENCHMARK(BM_ThetaGram)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
