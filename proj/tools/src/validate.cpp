#include "exitopt_cli/validate.hpp"

#include "exitopt/bargaining.hpp"
#include "exitopt/mc.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

namespace exitopt::cli {

namespace {

struct CheckPrinter {
    std::ostream& out;
    bool color;
    int failures = 0;

    void report(const std::string& name, bool pass, const std::string& detail) {
        const char* tag = pass ? "PASS" : "FAIL";
        if (color) {
            out << (pass ? "\x1b[32m" : "\x1b[31m") << tag << "\x1b[0m";
        } else {
            out << tag;
        }
        out << "  " << name << "  " << detail << "\n";
        if (!pass) ++failures;
    }
};

std::vector<double> threshold_grid(double lo, double hi, double maxStep) {
    const int n =
        std::max(2, static_cast<int>(std::ceil((hi - lo) / maxStep)) + 1);
    std::vector<double> g;
    g.reserve(n);
    for (int i = 0; i < n; ++i) {
        g.push_back(lo + (hi - lo) * static_cast<double>(i) /
                             static_cast<double>(n - 1));
    }
    return g;
}

// Passes when the argmax lands within one grid step of the analytic
// threshold, or when the simulated value at the argmax is within three
// standard errors (of the common-random-number difference) of the value at
// the grid point nearest the analytic threshold.
void check_grid(CheckPrinter& pr, const std::string& name,
                const GridSearchResult& res, double analytic) {
    const double step = res.values[1].threshold - res.values[0].threshold;
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < res.values.size(); ++i) {
        if (std::abs(res.values[i].threshold - analytic) <
            std::abs(res.values[nearest].threshold - analytic)) {
            nearest = i;
        }
    }
    const double argmax = res.bestThreshold;
    const bool withinStep = std::abs(argmax - analytic) <= step * (1.0 + 1e-9);
    const double gap =
        res.values[res.bestIndex].mean - res.values[nearest].mean;
    const double gapSe = res.diff_std_error(res.bestIndex, nearest);
    const bool withinGap = gap <= 3.0 * gapSe;
    std::ostringstream os;
    os << "analytic=" << format_number(analytic)
       << " argmax=" << format_number(argmax) << " step=" << format_number(step)
       << " value-gap=" << format_number(gap)
       << " gap-stderr=" << format_number(gapSe);
    pr.report(name, withinStep || withinGap, os.str());
}

}  // namespace

int run_validation(const Config& cfg, const ValidateOptions& opts,
                   std::ostream& out) {
    const ModelParams& p = cfg.params;
    const DiscountSpec& d = cfg.discount;
    const double bias = opts.thresholdBias;

    SimConfig valueCfg;
    valueCfg.numPaths =
        opts.quick ? std::min<std::int64_t>(opts.paths, 20000) : opts.paths;
    valueCfg.timeStep = opts.quick ? 0.01 : opts.timeStep;
    valueCfg.horizon = opts.quick ? 160.0 : opts.horizon;
    valueCfg.seed = opts.seed;
    valueCfg.antithetic = true;
    if (valueCfg.numPaths % 2 != 0) ++valueCfg.numPaths;

    SimConfig gridCfg = valueCfg;
    gridCfg.numPaths = std::max<std::int64_t>(valueCfg.numPaths / 32,
                                              opts.quick ? 2000 : 4000);
    if (gridCfg.numPaths % 2 != 0) ++gridCfg.numPaths;

    CheckPrinter pr{out, opts.color};

    const auto consistent = solve_consistent(p);
    const auto critical = solve_critical_only(p, d);
    const auto naive = solve_naive(p, d);
    const double xStar = consistent.xStar * bias;
    const double x0 = 1.0;
    const double analyticF1 = consistent.selves[0].value.value(x0);

    // Simulated value of the consistent policy against the closed form.
    {
        const std::vector<double> ths{xStar};
        const auto est = simulate_policy_value(p, d, AgentType::Consistent, ths,
                                               x0, valueCfg);
        const double z = (est.mean - analyticF1) / est.stdError;
        std::ostringstream os;
        os << "analytic=" << format_number(analyticF1)
           << " mc=" << format_number(est.mean)
           << " stderr=" << format_number(est.stdError)
           << " z=" << format_number(z);
        pr.report("value-consistent@x0=1", std::abs(z) <= 3.0, os.str());
    }

    // Nash price against the product-grid argmax.
    {
        const double analyticPrice = nash_price(p, x0);
        std::vector<double> priceGrid;
        for (double v = analyticPrice - 3.0; v <= analyticPrice + 3.0 + 1e-12;
             v += 0.01) {
            priceGrid.push_back(v);
        }
        const auto res = nash_product_check(p, x0, priceGrid);
        std::ostringstream os;
        os << "analytic=" << format_number(analyticPrice)
           << " grid-argmax=" << format_number(res.bestPrice);
        pr.report("nash-price-grid",
                  std::abs(res.bestPrice - analyticPrice * bias) <= 0.01 + 1e-9,
                  os.str());
    }

    const auto [eta, theta] = derive_eta_theta(p);
    const auto grid =
        threshold_grid(theta / eta * 1.01, consistent.xStar * 1.05, 0.05);

    {
        const auto res = grid_optimal_threshold(p, d, AgentType::Consistent, {},
                                                x0, gridCfg, grid);
        check_grid(pr, "grid-consistent", res, xStar);
    }
    {
        const std::vector<double> futures{consistent.xStar};
        const auto res = grid_optimal_threshold(
            p, d, AgentType::CriticalOnly, futures, x0, gridCfg, grid);
        check_grid(pr, "grid-critical-only", res,
                   critical.selves[0].threshold * bias);
    }
    {
        std::vector<double> futures;
        for (std::size_t i = 1; i < naive.selves.size(); ++i) {
            futures.push_back(naive.selves[i].threshold);
        }
        const auto res = grid_optimal_threshold(p, d, AgentType::Naive, futures,
                                                x0, gridCfg, grid);
        check_grid(pr, "grid-naive", res, naive.selves[0].threshold * bias);
    }

    out << (pr.failures == 0 ? "all checks passed\n"
                             : "some checks FAILED\n");
    return pr.failures;
}

}  // namespace exitopt::cli
