#include "exitopt/mc.hpp"
#include "exitopt/solvers.hpp"

#include <benchmark/benchmark.h>

using namespace exitopt;

namespace {

void BM_SimulateConsistentPolicy(benchmark::State& state) {
    const ModelParams p;
    DiscountSpec d;
    d.deltaF = 0.7;
    d.deltaP = 0.5;
    const double xStar = solve_consistent(p).xStar;
    SimConfig cfg;
    cfg.numPaths = state.range(0);
    cfg.timeStep = 0.01;
    cfg.horizon = 120.0;
    const std::vector<double> ths{xStar};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            simulate_policy_value(p, d, AgentType::Consistent, ths, 1.0, cfg));
    }
    state.SetItemsProcessed(state.iterations() * cfg.numPaths);
}
BENCHMARK(BM_SimulateConsistentPolicy)->Arg(2000)->Arg(8000)
    ->Unit(benchmark::kMillisecond);

void BM_NashPriceGrid(benchmark::State& state) {
    const ModelParams p;
    std::vector<double> grid;
    for (double v = 10.0; v <= 16.0; v += 0.01) grid.push_back(v);
    for (auto _ : state) {
        benchmark::DoNotOptimize(nash_product_check(p, 1.0, grid));
    }
}
BENCHMARK(BM_NashPriceGrid);

}  // namespace

BENCHMARK_MAIN();
