#include <benchmark/benchmark.h>

#include "splitmc/generators.hpp"
#include "splitmc/semantics.hpp"

using namespace splitmc;

static void BM_ReachRing(benchmark::State& state) {
  GroundModel g(gen_dining(make_ring(static_cast<int>(state.range(0)))));
  for (auto _ : state) {
    ReachResult r = reach(g);
    benchmark::DoNotOptimize(r.states.size());
  }
}
BENCHMARK(BM_ReachRing)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_ReachMutex(benchmark::State& state) {
  GroundModel g(gen_mutex(static_cast<int>(state.range(0)), true));
  for (auto _ : state) {
    ReachResult r = reach(g);
    benchmark::DoNotOptimize(r.states.size());
  }
}
BENCHMARK(BM_ReachMutex)->Arg(4)->Arg(6)->Arg(8);
