#include <benchmark/benchmark.h>

#include <cmath>

#include "mexp/diophantine.hpp"
#include "mexp/expsum.hpp"

using namespace mexp;

namespace {

const SieveTables& tables() {
  static const SieveTables t = build_tables(10000000);
  return t;
}

const FixedPointAlpha& alpha() {
  static const FixedPointAlpha a = alpha_fixed_point(IrrationalSpec::parse("quad:2"));
  return a;
}

ExecConfig workers(const benchmark::State& state) {
  ExecConfig c;
  c.workers = static_cast<int>(state.range(1));
  return c;
}

void BM_MobiusSum(benchmark::State& state) {
  const auto x = static_cast<std::uint64_t>(state.range(0));
  const auto exec = workers(state);
  for (auto _ : state) benchmark::DoNotOptimize(mobius_sum(x, alpha(), tables(), exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MobiusSumReference(benchmark::State& state) {
  const auto x = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::mobius_sum(x, alpha(), tables()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Type2(benchmark::State& state) {
  const auto x = static_cast<std::uint64_t>(state.range(0));
  const auto exec = workers(state);
  const std::uint64_t M = 2 * static_cast<std::uint64_t>(std::pow(static_cast<double>(x), 0.4));
  for (auto _ : state) benchmark::DoNotOptimize(type2_sum(x, M, M, alpha(), tables(), exec));
}

void BM_Type2Reference(benchmark::State& state) {
  const auto x = static_cast<std::uint64_t>(state.range(0));
  const std::uint64_t M = 2 * static_cast<std::uint64_t>(std::pow(static_cast<double>(x), 0.4));
  for (auto _ : state) benchmark::DoNotOptimize(reference::type2_sum(x, M, M, alpha(), tables()));
}

void BM_Type1(benchmark::State& state) {
  const auto x = static_cast<std::uint64_t>(state.range(0));
  const auto exec = workers(state);
  const std::uint64_t M = static_cast<std::uint64_t>(std::pow(static_cast<double>(x), 0.4)) + 1;
  for (auto _ : state) benchmark::DoNotOptimize(type1_sum(x, M, M, alpha(), tables(), GammaVariant::exact, exec));
}

void BM_LinearSum(benchmark::State& state) {
  std::uint64_t m = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(linear_sum(alpha(), m, 100000));
    m = m % 10000 + 1;
  }
}

}  // namespace

BENCHMARK(BM_MobiusSum)->ArgsProduct({{100000, 1000000, 10000000}, {1, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MobiusSumReference)->Arg(100000)->Arg(1000000)->Arg(10000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Type2)->ArgsProduct({{100000, 1000000}, {1, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Type2Reference)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Type1)->ArgsProduct({{100000, 1000000}, {1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinearSum);

BENCHMARK_MAIN();
