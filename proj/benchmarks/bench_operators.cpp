#include <benchmark/benchmark.h>

#include <hypercross/smolyak.hpp>
#include <hypercross/testbed.hpp>

#include <random>

using namespace hypercross;

namespace {

TrigPoly random_poly(int d, int terms, int max_freq) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> freq(-max_freq, max_freq);
  std::normal_distribution<double> coef;
  std::vector<std::pair<FreqIndex, Complex>> t;
  for (int i = 0; i < terms; ++i) {
    FreqIndex k(static_cast<std::size_t>(d));
    for (auto& v : k) v = freq(rng);
    t.emplace_back(k, Complex(coef(rng), coef(rng)));
  }
  return TrigPoly::from_terms(d, t);
}

void BM_ApplyAliasing(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  const QuasiInterpOp op = named_operator("K", {.dim = 2});
  const TrigPoly f = random_poly(2, 64, 200);
  for (auto _ : state) benchmark::DoNotOptimize(apply_aliasing(op, f, LevelVec{j, j}));
}
BENCHMARK(BM_ApplyAliasing)->DenseRange(2, 8, 2);

void BM_ApplySampled(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  const QuasiInterpOp op = named_operator("K", {.dim = 2});
  const TrigPoly f = random_poly(2, 64, 200);
  for (auto _ : state) benchmark::DoNotOptimize(apply_sampled(op, f, LevelVec{j, j}));
}
BENCHMARK(BM_ApplySampled)->DenseRange(2, 8, 2);

void BM_ApplySeparable(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  const QuasiInterpOp op = named_operator("Kstar", {.dim = 2});
  const TestFunction f = korobov(2.0, 2, 1 << 14);
  for (auto _ : state) benchmark::DoNotOptimize(apply_sampled(op, f.model, LevelVec{j, 10 - j}));
}
BENCHMARK(BM_ApplySeparable)->DenseRange(0, 10, 5);

void BM_SmolyakSeparable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QuasiInterpOp op = named_operator("Kstar", {.dim = 2});
  const TestFunction f = korobov(2.0, 2, 1 << 14);
  for (auto _ : state) benchmark::DoNotOptimize(smolyak_apply(op, f.model, n));
  state.counters["dof"] = static_cast<double>(smolyak_grid_size(n, 2));
}
BENCHMARK(BM_SmolyakSeparable)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

void BM_SmolyakDirectVsCombination(benchmark::State& state) {
  const auto mode = state.range(0) == 0 ? SmolyakMode::direct : SmolyakMode::combination;
  const QuasiInterpOp op = named_operator("K", {.dim = 3});
  const TrigPoly f = random_poly(3, 32, 40);
  for (auto _ : state) benchmark::DoNotOptimize(smolyak_apply(op, f, 6, mode));
}
BENCHMARK(BM_SmolyakDirectVsCombination)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
