#include <benchmark/benchmark.h>

#include "splitmc/generators.hpp"
#include "splitmc/splitfix.hpp"
#include "splitmc/symmetry.hpp"

using namespace splitmc;

static void BM_SplitFixpointRing(benchmark::State& state) {
  GroundModel g(gen_dining(make_ring(static_cast<int>(state.range(0)))));
  for (auto _ : state) {
    SplitInvariant theta = strongest_split_invariant(g);
    benchmark::DoNotOptimize(theta.total_states());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SplitFixpointRing)->RangeMultiplier(2)->Range(64, 4096)->Complexity();

static void BM_SplitFixpointTorus(benchmark::State& state) {
  int side = static_cast<int>(state.range(0));
  GroundModel g(gen_dining(make_torus(side, side)));
  for (auto _ : state) {
    SplitInvariant theta = strongest_split_invariant(g);
    benchmark::DoNotOptimize(theta.total_states());
  }
}
BENCHMARK(BM_SplitFixpointTorus)->Arg(4)->Arg(8)->Arg(16);

static void BM_GroundCompileRing(benchmark::State& state) {
  ModelFile m = gen_dining(make_ring(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    GroundModel g(m);
    benchmark::DoNotOptimize(g.total_commands());
  }
}
BENCHMARK(BM_GroundCompileRing)->Arg(256)->Arg(1024);

static void BM_GroupoidRing(benchmark::State& state) {
  GroundModel g(gen_dining(make_ring(static_cast<int>(state.range(0)))));
  for (auto _ : state) {
    auto grp = groupoid(g);
    benchmark::DoNotOptimize(grp.size());
  }
}
BENCHMARK(BM_GroupoidRing)->Arg(16)->Arg(64);

static void BM_ReducedFixpointRing(benchmark::State& state) {
  GroundModel g(gen_dining(make_ring(static_cast<int>(state.range(0)))));
  BalanceRelation b = largest_balance(g, groupoid(g));
  for (auto _ : state) {
    SplitInvariant theta = reduced_fixpoint(g, b);
    benchmark::DoNotOptimize(theta.total_states());
  }
}
BENCHMARK(BM_ReducedFixpointRing)->Arg(64)->Arg(256);
