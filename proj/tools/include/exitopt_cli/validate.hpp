#pragma once

#include "exitopt_cli/config.hpp"

#include <cstdint>
#include <iosfwd>

namespace exitopt::cli {

struct ValidateOptions {
    std::int64_t paths = 200000;
    std::uint64_t seed = 20260810;
    double timeStep = 0.005;
    double horizon = 240.0;
    bool quick = false;              // cut paths/horizon for smoke runs
    double thresholdBias = 1.0;      // negative-control knob, scales analytic thresholds
    bool color = false;
};

// Runs the Monte Carlo / grid-search agreement checks between the analytic
// solvers and simulated policies. Returns the number of failed checks.
int run_validation(const Config& cfg, const ValidateOptions& opts,
                   std::ostream& out);

}  // namespace exitopt::cli
