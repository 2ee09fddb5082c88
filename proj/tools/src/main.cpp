#include "exitopt_cli/config.hpp"
#include "exitopt_cli/figures.hpp"
#include "exitopt_cli/sweep.hpp"
#include "exitopt_cli/validate.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <unistd.h>

namespace {

using namespace exitopt;
using namespace exitopt::cli;

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitOracle = 4;

bool use_color() {
    return ::isatty(STDOUT_FILENO) != 0 && std::getenv("NO_COLOR") == nullptr;
}

void print_solution(const ThresholdSolution& sol) {
    for (const auto& s : sol.selves) {
        std::cout << to_string(sol.agent) << "\tself " << s.selfIndex << "\t"
                  << format_number(s.threshold) << "\tresidual "
                  << format_number(s.root.residual) << "\titers "
                  << s.root.iterations << "\tbranch " << to_string(sol.branch)
                  << "\n";
    }
}

int cmd_threshold(const std::string& configPath, const std::string& dumpPath) {
    Config cfg;
    try {
        cfg = load_config(configPath);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
    if (!dumpPath.empty()) {
        std::ofstream out(dumpPath, std::ios::binary);
        if (!out) {
            std::cerr << dumpPath << ": error: cannot open for writing\n";
            return kExitConfig;
        }
        out << dump_config(cfg);
    }
    try {
        print_solution(solve_consistent(cfg.params));
        print_solution(solve_critical_only(cfg.params, cfg.discount));
        print_solution(solve_naive(cfg.params, cfg.discount));
        print_solution(solve_sophisticated(cfg.params, cfg.discount));
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
    return 0;
}

int cmd_sweep(const std::string& configPath, SweepSpec fromFlags,
              bool haveValuesFlags) {
    Config cfg;
    try {
        cfg = load_config(configPath);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
    SweepSpec spec;
    if (cfg.sweep) spec = *cfg.sweep;
    if (!fromFlags.parameter.empty()) spec.parameter = fromFlags.parameter;
    if (haveValuesFlags) spec.values = fromFlags.values;
    if (!fromFlags.agents.empty()) spec.agents = fromFlags.agents;
    if (!fromFlags.outputPath.empty()) spec.outputPath = fromFlags.outputPath;

    if (spec.parameter.empty() || spec.values.empty() || spec.agents.empty() ||
        spec.outputPath.empty()) {
        std::cerr << configPath
                  << ": error: sweep needs parameter, values, agents and an "
                     "output path (from the config or flags)\n";
        return kExitConfig;
    }

    std::vector<SweepRow> rows;
    try {
        rows = run_sweep(cfg.params, cfg.discount, spec);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
    std::ofstream out(spec.outputPath, std::ios::binary);
    if (!out) {
        std::cerr << spec.outputPath << ": error: cannot open for writing\n";
        return kExitConfig;
    }
    write_csv(rows, out);
    std::cout << "wrote " << spec.outputPath << " (" << rows.size()
              << " rows)\n";
    return 0;
}

int cmd_figure(const std::string& name, const std::string& outPath,
               bool asPrinted) {
    try {
        const auto written = write_figure(name, outPath, asPrinted);
        for (const auto& w : written) std::cout << "wrote " << w << "\n";
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
    return 0;
}

int cmd_validate(const std::string& configPath, ValidateOptions opts) {
    Config cfg;
    try {
        cfg = load_config(configPath);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
    opts.color = use_color();
    try {
        const int failures = run_validation(cfg, opts, std::cout);
        return failures == 0 ? 0 : kExitOracle;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "exitopt: trade-sale exit thresholds for venture capital under "
        "quasi-hyperbolic discounting"};
    app.require_subcommand(1);

    // threshold
    std::string thresholdConfig, dumpPath;
    auto* sub = app.add_subcommand(
        "threshold", "solve all four agent types and print the thresholds");
    sub->add_option("config", thresholdConfig, "JSON config file")->required();
    sub->add_option("--dump-config", dumpPath,
                    "write the parsed config back to this path");

    // sweep
    std::string sweepConfig, sweepParam, sweepOut, sweepAgents;
    double sweepFrom = 0.0, sweepTo = 0.0;
    int sweepPoints = 0;
    auto* sw = app.add_subcommand("sweep",
                                  "sweep one parameter and write threshold CSV");
    sw->add_option("config", sweepConfig, "JSON config file")->required();
    sw->add_option("--param", sweepParam, "parameter name to sweep");
    auto* fromOpt = sw->add_option("--from", sweepFrom, "sweep start");
    sw->add_option("--to", sweepTo, "sweep end")->needs(fromOpt);
    sw->add_option("--points", sweepPoints, "number of sweep points")
        ->needs(fromOpt);
    sw->add_option("--agents", sweepAgents,
                   "comma-separated agents (consistent,critical-only,naive,"
                   "sophisticated)");
    sw->add_option("--out", sweepOut, "output CSV path");

    // figure
    std::string figName, figOut = "figure.csv";
    bool asPrinted = false;
    auto* fg = app.add_subcommand("figure",
                                  "write a bundled sensitivity preset as CSV");
    fg->add_option("name", figName, "preset name (fig5..fig11)")->required();
    fg->add_option("--out", figOut, "output CSV path (suffixed per panel set)");
    fg->add_flag("--as-printed", asPrinted,
                 "fig9..fig11: use the inverted delta ordering deltaF=0.5, "
                 "deltaP=0.7 instead of the default swapped ordering");

    // validate
    std::string valConfig;
    ValidateOptions vopts;
    bool quick = false;
    auto* va = app.add_subcommand(
        "validate", "Monte Carlo / grid-search agreement checks");
    va->add_option("config", valConfig, "JSON config file")->required();
    va->add_option("--paths", vopts.paths, "Monte Carlo paths");
    va->add_option("--seed", vopts.seed, "random seed");
    va->add_option("--time-step", vopts.timeStep, "simulation time step");
    va->add_flag("--quick", quick, "smoke-test sizes");
    va->add_option("--inject-threshold-bias", vopts.thresholdBias,
                   "scale analytic thresholds (negative-control knob)");

    CLI11_PARSE(app, argc, argv);

    if (sub->parsed()) return cmd_threshold(thresholdConfig, dumpPath);
    if (sw->parsed()) {
        SweepSpec flags;
        flags.parameter = sweepParam;
        flags.outputPath = sweepOut;
        bool haveValues = false;
        if (sweepPoints > 0) {
            haveValues = true;
            for (int i = 0; i < sweepPoints; ++i) {
                const double t = sweepPoints == 1
                                     ? 0.0
                                     : static_cast<double>(i) /
                                           static_cast<double>(sweepPoints - 1);
                flags.values.push_back(sweepFrom + t * (sweepTo - sweepFrom));
            }
        }
        if (!sweepAgents.empty()) {
            std::stringstream ss(sweepAgents);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                try {
                    flags.agents.push_back(agent_from_name(tok));
                } catch (const std::invalid_argument& e) {
                    std::cerr << "error: " << e.what() << "\n";
                    return kExitConfig;
                }
            }
        }
        return cmd_sweep(sweepConfig, std::move(flags), haveValues);
    }
    if (fg->parsed()) return cmd_figure(figName, figOut, asPrinted);
    if (va->parsed()) {
        vopts.quick = quick;
        return cmd_validate(valConfig, vopts);
    }
    return 0;
}
