#pragma once

#include "exitopt_cli/config.hpp"
#include "exitopt_cli/sweep.hpp"

#include <string>
#include <vector>

namespace exitopt::cli {

// One CSV worth of sweep runs (a figure panel group sharing a file).
struct FigureJob {
    std::string fileSuffix;  // empty for the primary file
    ModelParams params;
    DiscountSpec discount;
    bool allowDeltaInversion = false;
    std::vector<SweepSpec> sweeps;  // concatenated into one CSV
};

// Bundled sensitivity presets fig5..fig11. `asPrinted` switches fig9..fig11
// to the delta ordering deltaF=0.5 < deltaP=0.7 instead of the default
// swapped ordering (the inverted ordering is accepted only here).
std::vector<FigureJob> figure_jobs(const std::string& name, bool asPrinted);

// Runs the jobs and writes CSVs derived from outPath (suffix inserted before
// the extension); returns the written paths.
std::vector<std::string> write_figure(const std::string& name,
                                      const std::string& outPath,
                                      bool asPrinted);

}  // namespace exitopt::cli
