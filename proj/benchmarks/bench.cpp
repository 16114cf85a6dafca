#include <benchmark/benchmark.h>

#include <random>

#include "dagvisit/builders.hpp"
#include "dagvisit/machine.hpp"
#include "dagvisit/oracles.hpp"
#include "dagvisit/random_dag.hpp"

using namespace dagvisit;

namespace {

Dag random_dag(int n, uint32_t seed) {
    std::mt19937 rng(seed);
    RandomDagOptions ro;
    ro.n = n;
    return random_layered_dag(ro, rng);
}

void BM_BoundaryProfile(benchmark::State& state) {
    GeneratedDag py = generate(PyramidSpec{2, static_cast<int>(state.range(0))});
    VisitRule sin = VisitRule::singleton(py.dag);
    VisitSequence seq = VisitSequence::of(py.dag, topological_order(py.dag));
    for (auto _ : state)
        benchmark::DoNotOptimize(boundary_profile(py.dag, sin, seq));
    state.SetItemsProcessed(state.iterations() * py.dag.n());
}
BENCHMARK(BM_BoundaryProfile)->Arg(16)->Arg(40);

void BM_BuildSingletonVisit(benchmark::State& state) {
    Dag d = random_dag(static_cast<int>(state.range(0)), 11);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_singleton_visit(d));
}
BENCHMARK(BM_BuildSingletonVisit)->Arg(100)->Arg(400);

void BM_BuildTopologicalVisit(benchmark::State& state) {
    Dag d = random_dag(static_cast<int>(state.range(0)), 13);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_topological_visit(d));
}
BENCHMARK(BM_BuildTopologicalVisit)->Arg(100)->Arg(400);

void BM_SubsetDpBoundary(benchmark::State& state) {
    Dag d = random_dag(static_cast<int>(state.range(0)), 17);
    VisitRule sin = VisitRule::singleton(d);
    for (auto _ : state)
        benchmark::DoNotOptimize(exact_boundary_complexity(d, sin));
}
BENCHMARK(BM_SubsetDpBoundary)->Arg(14)->Arg(18);

void BM_DiamondAstar(benchmark::State& state) {
    const int b = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_diamond_astar(2, b, 8));
    state.SetItemsProcessed(state.iterations() * b * b);
}
BENCHMARK(BM_DiamondAstar)->Arg(32)->Arg(64);

void BM_BestPartitionWrite(benchmark::State& state) {
    GeneratedDag d_r = reversed(generate(DiamondSpec{2, static_cast<int>(state.range(0))}));
    BlockedVisit bv = build_diamond_blocked_visit(d_r, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            best_partition(d_r.dag, bv.rule, bv.visit.sequence, 1, BoundMetric::Write));
}
BENCHMARK(BM_BestPartitionWrite)->Arg(6)->Arg(8);

void BM_MinPostDominator(benchmark::State& state) {
    GeneratedDag dia = generate(DiamondSpec{2, static_cast<int>(state.range(0))});
    VertexSet half;
    for (int v = 0; v < dia.dag.n() / 2; ++v) half.push_back(v);
    for (auto _ : state)
        benchmark::DoNotOptimize(min_post_dominator(dia.dag, half));
}
BENCHMARK(BM_MinPostDominator)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
