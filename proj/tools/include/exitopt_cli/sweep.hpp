#pragma once

#include "exitopt_cli/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace exitopt::cli {

struct SweepRow {
    std::string param;
    double value = 0.0;
    AgentType agent = AgentType::Consistent;
    int selfIndex = 0;
    bool ok = true;
    double threshold = 0.0;
    double residual = 0.0;
    std::string diagnostic;  // set when !ok
};

// Runs the sweep; invalid points or per-point solver failures become rows
// with an empty threshold and a diagnostic, never silent drops. Values are
// emitted ascending, agents in declaration order.
std::vector<SweepRow> run_sweep(const ModelParams& base,
                                const DiscountSpec& baseDiscount,
                                const SweepSpec& spec,
                                bool allowDeltaInversion = false);

// Header: param,value,agent,selfIndex,threshold,residual
void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace exitopt::cli
