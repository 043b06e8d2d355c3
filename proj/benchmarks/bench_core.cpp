#include <benchmark/benchmark.h>

#include <memory>

#include "ecps/diagnostics.hpp"
#include "ecps/ergodic.hpp"
#include "ecps/translation.hpp"

using namespace ecps;

namespace {

std::shared_ptr<const ChainSystem> cantor() { return std::make_shared<const ChainSystem>(ChainSystem::cantor()); }

std::shared_ptr<const ChainSystem> skew() {
  return std::make_shared<const ChainSystem>(ChainSystem::bernoulli(2, {Rational(2, 3), Rational(1, 3)}));
}

ExtendedState wide(std::shared_ptr<const ChainSystem> sys, int depth, std::uint64_t stream) {
  Rng rng(3, stream);
  auto e = theta(std::make_shared<const ChainState>(sample_state(std::move(sys), depth, rng)));
  Extender ext(Rng(3, stream + 100), RetryBudget{8, 12});
  ext.run(e, [](const ExtendedState& x) { return tau_n(x, 64).back(); });
  return e;
}

void BM_PhiTrace(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  Rng rng(1);
  const auto s = sample_state(cantor(), depth + 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(phi_trace(s, depth));
}
BENCHMARK(BM_PhiTrace)->Arg(50)->Arg(200);

void BM_SampleForward(benchmark::State& state) {
  Rng rng(2);
  const auto s = sample_state(skew(), static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(sample_forward(s, rng));
}
BENCHMARK(BM_SampleForward)->Arg(12)->Arg(64);

void BM_Theta(benchmark::State& state) {
  Rng rng(4);
  const auto s = sample_state(skew(), static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(theta(s));
}
BENCHMARK(BM_Theta)->Arg(12)->Arg(48);

void BM_TMap(benchmark::State& state) {
  const auto e = wide(skew(), 14, 5);
  for (auto _ : state) benchmark::DoNotOptimize(T_map(e));
}
BENCHMARK(BM_TMap);

void BM_TauN(benchmark::State& state) {
  const auto e = wide(cantor(), 12, 6);
  for (auto _ : state) benchmark::DoNotOptimize(tau_n(e, 64));
}
BENCHMARK(BM_TauN);

void BM_GroupSum(benchmark::State& state) {
  Rng rng(7);
  const auto s = sample_state(cantor(), 8, rng);
  const int n = -static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(group_sum_check(s, n));
}
BENCHMARK(BM_GroupSum)->Arg(2)->Arg(5);

void BM_AverageSeries(benchmark::State& state) {
  auto e = theta(std::make_shared<const ChainState>([] {
    Rng rng(8);
    return sample_state(cantor(), 12, rng);
  }()));
  Extender ext(Rng(8, 1), RetryBudget{8, 12});
  const auto f = make_functional("occ:2");
  const std::vector<std::int64_t> checkpoints{static_cast<std::int64_t>(state.range(0))};
  ext.run(e, [&](const ExtendedState& x) { return average_series(f, x.nu, checkpoints); });
  for (auto _ : state) benchmark::DoNotOptimize(average_series(f, e.nu, checkpoints));
}
BENCHMARK(BM_AverageSeries)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
