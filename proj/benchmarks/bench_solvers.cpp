#include "exitopt/solvers.hpp"

#include <benchmark/benchmark.h>

using namespace exitopt;

namespace {

DiscountSpec bench_discount(int selves) {
    DiscountSpec d;
    d.deltaF = 0.7;
    d.deltaP = 0.4;
    d.lambdaF = 0.5;
    d.lambdaPN = 0.5;
    d.lambdaPS = 0.5;
    d.lambdaE = 0.5;
    d.numSelves = selves;
    return d;
}

void BM_SolveConsistent(benchmark::State& state) {
    const ModelParams p;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_consistent(p));
    }
}
BENCHMARK(BM_SolveConsistent);

void BM_SolveCriticalOnly(benchmark::State& state) {
    const ModelParams p;
    const DiscountSpec d = bench_discount(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_critical_only(p, d));
    }
}
BENCHMARK(BM_SolveCriticalOnly);

void BM_SolveNaive(benchmark::State& state) {
    const ModelParams p;
    const DiscountSpec d = bench_discount(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_naive(p, d));
    }
}
BENCHMARK(BM_SolveNaive);

void BM_SolveSophisticated(benchmark::State& state) {
    const ModelParams p;
    const DiscountSpec d = bench_discount(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_sophisticated(p, d));
    }
}
BENCHMARK(BM_SolveSophisticated)->Arg(4)->Arg(6)->Arg(8);

}  // namespace
