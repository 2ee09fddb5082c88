#include "exitopt_cli/figures.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace exitopt::cli {

namespace {

std::vector<double> linspace(double from, double to, int points) {
    std::vector<double> v;
    v.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0
                                     : static_cast<double>(i) /
                                           static_cast<double>(points - 1);
        v.push_back(from + t * (to - from));
    }
    return v;
}

SweepSpec sweep_of(std::string param, std::vector<double> values,
                   std::vector<AgentType> agents) {
    SweepSpec s;
    s.parameter = std::move(param);
    s.values = std::move(values);
    s.agents = std::move(agents);
    return s;
}

// Single-jump expiry intensity matching the mean expiry time of the naive
// two-transition chain: 1/lambdaE = 1/lambdaF + 1/lambdaPN.
double matched_lambda_e(double lambdaF, double lambdaPN) {
    return 1.0 / (1.0 / lambdaF + 1.0 / lambdaPN);
}

const std::vector<AgentType> kAllAgents = {
    AgentType::Consistent, AgentType::CriticalOnly, AgentType::Naive,
    AgentType::Sophisticated};

// Shared settings of the key-factor presets fig9..fig11: fast self turnover
// and six selves to spread the naive/sophisticated gap.
void key_factor_base(ModelParams& p, DiscountSpec& d, bool asPrinted) {
    p = ModelParams{};
    d = DiscountSpec{};
    d.lambdaF = 4.0;
    d.lambdaPS = 4.0;
    d.numSelves = 6;
    d.lambdaPN = d.lambdaF / (d.numSelves - 1);
    d.lambdaE = d.lambdaPN;
    if (asPrinted) {
        d.deltaF = 0.5;
        d.deltaP = 0.7;
    } else {
        d.deltaF = 0.7;
        d.deltaP = 0.5;
    }
}

}  // namespace

std::vector<FigureJob> figure_jobs(const std::string& name, bool asPrinted) {
    std::vector<FigureJob> jobs;

    if (name == "fig5") {
        FigureJob j;
        j.params = ModelParams{};
        j.discount = DiscountSpec{};
        j.discount.deltaF = 1.0;
        j.discount.deltaP = 0.3;
        j.discount.lambdaE = 1.0;
        const std::vector<AgentType> agents = {AgentType::Consistent,
                                               AgentType::CriticalOnly};
        j.sweeps.push_back(sweep_of("deltaP", linspace(0.01, 1.0, 51), agents));
        j.sweeps.push_back(sweep_of("lambdaE", linspace(0.02, 1.0, 50), agents));
        jobs.push_back(std::move(j));
    } else if (name == "fig6") {
        FigureJob j;
        j.params = ModelParams{};
        j.discount = DiscountSpec{};
        j.discount.deltaF = 0.7;
        j.discount.lambdaF = 1.0;
        j.discount.lambdaPN = 1.0;
        j.discount.lambdaE = matched_lambda_e(1.0, 1.0);
        j.discount.numSelves = 4;
        j.sweeps.push_back(sweep_of(
            "deltaP", linspace(0.01, 0.7, 70),
            {AgentType::CriticalOnly, AgentType::Naive}));
        jobs.push_back(std::move(j));
    } else if (name == "fig7") {
        for (double lpn : {0.8, 0.5, 0.2, 0.05}) {
            FigureJob j;
            char suffix[32];
            std::snprintf(suffix, sizeof(suffix), "_lpn%03d",
                          static_cast<int>(std::lround(lpn * 100)));
            j.fileSuffix = suffix;
            j.params = ModelParams{};
            j.discount = DiscountSpec{};
            j.discount.deltaF = 0.7;
            j.discount.lambdaF = 1.0;
            j.discount.lambdaPN = lpn;
            j.discount.lambdaE = matched_lambda_e(1.0, lpn);
            j.discount.numSelves = 4;
            j.sweeps.push_back(sweep_of(
                "deltaP", linspace(0.01, 0.7, 70),
                {AgentType::CriticalOnly, AgentType::Naive}));
            jobs.push_back(std::move(j));
        }
    } else if (name == "fig8") {
        for (int selves : {4, 5, 6}) {
            FigureJob j;
            j.fileSuffix = "_selves" + std::to_string(selves);
            j.params = ModelParams{};
            j.discount = DiscountSpec{};
            j.discount.deltaF = 0.7;
            j.discount.lambdaF = 0.5;
            j.discount.lambdaPS = 0.5;
            j.discount.numSelves = selves;
            j.discount.lambdaPN = j.discount.lambdaF / (selves - 1);
            j.discount.lambdaE = j.discount.lambdaPN;
            j.sweeps.push_back(sweep_of(
                "deltaP", linspace(0.01, 0.7, 36),
                {AgentType::CriticalOnly, AgentType::Naive,
                 AgentType::Sophisticated}));
            jobs.push_back(std::move(j));
        }
    } else if (name == "fig9") {
        FigureJob j;
        key_factor_base(j.params, j.discount, asPrinted);
        j.allowDeltaInversion = asPrinted;
        j.sweeps.push_back(sweep_of("cost", linspace(6.0, 14.0, 33), kAllAgents));
        j.sweeps.push_back(sweep_of("betaVC", linspace(0.0, 1.0, 41), kAllAgents));
        jobs.push_back(std::move(j));
    } else if (name == "fig10") {
        FigureJob j;
        key_factor_base(j.params, j.discount, asPrinted);
        j.allowDeltaInversion = asPrinted;
        j.sweeps.push_back(sweep_of("d", linspace(0.0, 2.0, 41), kAllAgents));
        j.sweeps.push_back(sweep_of("phi", linspace(0.1, 1.0, 37), kAllAgents));
        jobs.push_back(std::move(j));
    } else if (name == "fig11") {
        FigureJob j;
        key_factor_base(j.params, j.discount, asPrinted);
        j.allowDeltaInversion = asPrinted;
        j.sweeps.push_back(sweep_of("alpha", linspace(0.0, 0.05, 26), kAllAgents));
        j.sweeps.push_back(sweep_of("sigma", linspace(0.1, 0.4, 31), kAllAgents));
        jobs.push_back(std::move(j));
    } else {
        throw std::invalid_argument("unknown figure '" + name +
                                    "' (expected fig5..fig11)");
    }
    return jobs;
}

std::vector<std::string> write_figure(const std::string& name,
                                      const std::string& outPath,
                                      bool asPrinted) {
    const auto jobs = figure_jobs(name, asPrinted);
    std::vector<std::string> written;
    for (const auto& job : jobs) {
        std::string path = outPath;
        if (!job.fileSuffix.empty()) {
            const auto dot = path.rfind('.');
            if (dot == std::string::npos) {
                path += job.fileSuffix;
            } else {
                path.insert(dot, job.fileSuffix);
            }
        }
        std::vector<SweepRow> rows;
        for (const auto& sweep : job.sweeps) {
            auto part = run_sweep(job.params, job.discount, sweep,
                                  job.allowDeltaInversion);
            rows.insert(rows.end(), part.begin(), part.end());
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot open output file " + path);
        }
        write_csv(rows, out);
        written.push_back(path);
    }
    return written;
}

}  // namespace exitopt::cli
