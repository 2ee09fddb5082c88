#include "exitopt_cli/sweep.hpp"

#include <algorithm>
#include <ostream>

namespace exitopt::cli {

namespace {

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

void emit_solution(std::vector<SweepRow>& rows, const std::string& param,
                   double value, AgentType agent,
                   const ThresholdSolution& sol) {
    for (const auto& s : sol.selves) {
        SweepRow r;
        r.param = param;
        r.value = value;
        r.agent = agent;
        r.selfIndex = s.selfIndex;
        r.threshold = s.threshold;
        r.residual = s.root.residual;
        rows.push_back(std::move(r));
    }
}

}  // namespace

std::vector<SweepRow> run_sweep(const ModelParams& base,
                                const DiscountSpec& baseDiscount,
                                const SweepSpec& spec,
                                bool allowDeltaInversion) {
    if (spec.values.empty()) {
        throw ConfigError("<sweep>", 0, "empty sweep values list");
    }
    if (spec.agents.empty()) {
        throw ConfigError("<sweep>", 0, "empty agents list");
    }
    std::vector<double> values = spec.values;
    std::sort(values.begin(), values.end());

    std::vector<SweepRow> rows;
    for (double v : values) {
        ModelParams p = base;
        DiscountSpec d = baseDiscount;
        apply_parameter(spec.parameter, v, p, d);

        std::string pointError;
        try {
            validate(p);
            validate(d, allowDeltaInversion);
        } catch (const std::invalid_argument& e) {
            pointError = e.what();
        }

        for (AgentType agent : spec.agents) {
            if (!pointError.empty()) {
                SweepRow r;
                r.param = spec.parameter;
                r.value = v;
                r.agent = agent;
                r.ok = false;
                r.diagnostic = sanitize(pointError);
                rows.push_back(std::move(r));
                continue;
            }
            try {
                ThresholdSolution sol;
                switch (agent) {
                    case AgentType::Consistent: sol = solve_consistent(p); break;
                    case AgentType::CriticalOnly: sol = solve_critical_only(p, d); break;
                    case AgentType::Naive: sol = solve_naive(p, d); break;
                    case AgentType::Sophisticated: sol = solve_sophisticated(p, d); break;
                }
                emit_solution(rows, spec.parameter, v, agent, sol);
            } catch (const std::exception& e) {
                SweepRow r;
                r.param = spec.parameter;
                r.value = v;
                r.agent = agent;
                r.ok = false;
                r.diagnostic = sanitize(e.what());
                rows.push_back(std::move(r));
            }
        }
    }
    return rows;
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "param,value,agent,selfIndex,threshold,residual\n";
    for (const auto& r : rows) {
        out << r.param << ',' << format_number(r.value) << ','
            << to_string(r.agent) << ',' << r.selfIndex << ',';
        if (r.ok) {
            out << format_number(r.threshold) << ',' << format_number(r.residual);
        } else {
            out << ',' << "error: " << r.diagnostic;
        }
        out << '\n';
    }
}

}  // namespace exitopt::cli
