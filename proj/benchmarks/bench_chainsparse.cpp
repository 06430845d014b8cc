#include <benchmark/benchmark.h>

#include "chainsparse/chain_metrics.hpp"
#include "chainsparse/density.hpp"
#include "chainsparse/generators.hpp"
#include "chainsparse/sparsify.hpp"
#include "chainsparse/weighted.hpp"

using namespace chainsparse;

namespace {

Code bench_code(std::size_t m, std::size_t count, std::uint64_t seed = 1) {
  Rng rng = make_rng(seed, "bench");
  return random_code(m, count, 0.35, rng);
}

void BM_ChainLengthRandom(benchmark::State& state) {
  const Code c = bench_code(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    const auto r = chain_length_exact(c);
    nodes = r.nodes;
    benchmark::DoNotOptimize(r.value);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_ChainLengthRandom)->Args({10, 32})->Args({14, 60})->Args({16, 120})->Unit(benchmark::kMillisecond);

void BM_ChainLengthCuts(benchmark::State& state) {
  Rng rng = make_rng(static_cast<std::uint64_t>(state.range(0)), "bench/graph");
  const Code c = cut_code(random_connected_graph(static_cast<std::size_t>(state.range(0)), 0.5, rng));
  for (auto _ : state) benchmark::DoNotOptimize(chain_length_exact(c).value);
  state.counters["words"] = static_cast<double>(c.size());
}
BENCHMARK(BM_ChainLengthCuts)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_NrdRandom(benchmark::State& state) {
  const Code c = bench_code(static_cast<std::size_t>(state.range(0)), 40);
  for (auto _ : state) benchmark::DoNotOptimize(nrd_exact(c).value);
}
BENCHMARK(BM_NrdRandom)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_DensityExact(benchmark::State& state) {
  const Code c = bench_code(12, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(density(c, DensityMode::kExact).phi);
}
BENCHMARK(BM_DensityExact)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_DensityHeuristic(benchmark::State& state) {
  const Code c = bench_code(24, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(density(c, DensityMode::kHeuristic).phi);
}
BENCHMARK(BM_DensityHeuristic)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SparsifyBlocks(benchmark::State& state) {
  const auto half = static_cast<std::size_t>(state.range(0));
  const Code c = parallel_block_code({half, half});
  auto params = SparsifyParams::practical(0.25, 7);
  params.eta_constant = 0.03;
  std::size_t support = 0;
  for (auto _ : state) {
    const auto r = sparsify_unweighted(c, params);
    support = r.report.output_support;
    benchmark::DoNotOptimize(support);
  }
  state.counters["support"] = static_cast<double>(support);
}
BENCHMARK(BM_SparsifyBlocks)->Arg(250)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_DimensionFree(benchmark::State& state) {
  const std::size_t m = std::size_t{1} << state.range(0);
  const Code c = parallel_block_code({m / 2, m / 2});
  WeightedParams params;
  params.sparsify = SparsifyParams::practical(0.5, 1);
  params.sparsify.eta_constant = 2e-4;
  params.sparsify.attempt_cap = 2000;
  params.sparsify.cl_bound = 2;
  params.q_constant = 1.0;
  std::size_t support = 0;
  for (auto _ : state) {
    const auto r = sparsify_dimension_free(c, WeightVector::uniform(m), 0.5, params);
    support = r.report.output_support;
  }
  state.counters["support"] = static_cast<double>(support);
}
BENCHMARK(BM_DimensionFree)->Arg(12)->Arg(14)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
