#pragma once

#include "exitopt/params.hpp"
#include "exitopt/solvers.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace exitopt {

// Monte Carlo configuration. The default horizon keeps the truncated tail
// below 1e-6 of the payoff scale at the default discount rate.
struct SimConfig {
    std::int64_t numPaths = 200000;
    double timeStep = 0.005;
    double horizon = 240.0;
    std::uint64_t seed = 20260810;
    bool antithetic = true;
};

struct McEstimate {
    double mean = 0.0;
    double stdError = 0.0;
    std::int64_t numPaths = 0;
};

struct GridValue {
    double threshold;
    double mean;
    double stdError;
};

struct GridSearchResult {
    std::vector<GridValue> values;
    std::size_t bestIndex = 0;
    double bestThreshold = 0.0;

    // Standard error of mean(i) - mean(j) under common random numbers,
    // estimated from batch means.
    double diff_std_error(std::size_t i, std::size_t j) const;

    std::vector<std::vector<double>> batchMeans;  // [level][batch]
};

// Estimates self 0's expected discounted exit payoff when each self n
// exercises at the first crossing of thresholds[n]. Self transitions are
// drawn exponentially per the agent's chain; payoffs realised after self 0's
// death carry deltaF, payoffs after the terminal transition carry deltaP.
// The walk uses exact GBM log transitions on the time grid with a
// Brownian-bridge crossing correction between grid points.
McEstimate simulate_policy_value(const ModelParams& p, const DiscountSpec& d,
                                 AgentType agent,
                                 std::span<const double> thresholds, double x0,
                                 const SimConfig& cfg);

// Evaluates the self-0 value over a grid of stage-0 thresholds, holding the
// future selves' thresholds fixed, with common random numbers across grid
// points. Returns the argmax along with all estimates.
GridSearchResult grid_optimal_threshold(const ModelParams& p,
                                        const DiscountSpec& d, AgentType agent,
                                        std::span<const double> futureThresholds,
                                        double x0, const SimConfig& cfg,
                                        std::span<const double> grid);

struct NashGridResult {
    double bestPrice = 0.0;
    std::size_t bestIndex = 0;
};

// Grid argmax of the Nash product over candidate prices; throws if the
// optimum sits on the grid boundary (bracket failure).
NashGridResult nash_product_check(const ModelParams& p, double x,
                                  std::span<const double> priceGrid);

namespace detail {

// Stage structure of a policy simulation: thresholds per stage, the
// exponential intensity of leaving each non-terminal stage, and the payoff
// reduction factor self 0 applies to exercises in each stage.
struct StagePlan {
    std::vector<double> thresholds;
    std::vector<double> intensities;  // size thresholds.size() - 1
    std::vector<double> factors;      // size thresholds.size()
};

StagePlan build_stage_plan(const DiscountSpec& d, AgentType agent,
                           std::span<const double> thresholds);

}  // namespace detail

}  // namespace exitopt
