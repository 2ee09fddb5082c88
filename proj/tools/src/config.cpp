#include "exitopt_cli/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace exitopt::cli {

using nlohmann::json;

ConfigError::ConfigError(std::string path_, int line_, const std::string& what)
    : std::runtime_error(path_ + (line_ > 0 ? ":" + std::to_string(line_) : "") +
                         ": error: " + what),
      path(std::move(path_)),
      line(line_) {}

namespace {

int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

double require_number(const json& j, const std::string& path,
                      const std::string& key) {
    if (!j.is_number()) {
        throw ConfigError(path, 0, "field '" + key + "' must be a number");
    }
    return j.get<double>();
}

}  // namespace

AgentType agent_from_name(const std::string& name) {
    if (name == "consistent") return AgentType::Consistent;
    if (name == "critical-only" || name == "critical") return AgentType::CriticalOnly;
    if (name == "naive") return AgentType::Naive;
    if (name == "sophisticated") return AgentType::Sophisticated;
    throw std::invalid_argument(
        "unknown agent '" + name +
        "' (expected consistent, critical-only, naive or sophisticated)");
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path, 0, "cannot open file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, line_of_byte(text, e.byte), e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError(path, 1, "top-level JSON value must be an object");
    }

    Config cfg;
    bool sawSweepKey = false;
    SweepSpec sweep;
    std::optional<double> from, to;
    std::optional<long> points;

    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        if (key == "alpha") cfg.params.alpha = require_number(v, path, key);
        else if (key == "sigma") cfg.params.sigma = require_number(v, path, key);
        else if (key == "rho") cfg.params.rho = require_number(v, path, key);
        else if (key == "qM") cfg.params.qM = require_number(v, path, key);
        else if (key == "qA") cfg.params.qA = require_number(v, path, key);
        else if (key == "qT") cfg.params.qT = require_number(v, path, key);
        else if (key == "betaVC") cfg.params.betaVC = require_number(v, path, key);
        else if (key == "phi") cfg.params.phi = require_number(v, path, key);
        else if (key == "d") cfg.params.d = require_number(v, path, key);
        else if (key == "cost") cfg.params.cost = require_number(v, path, key);
        else if (key == "deltaF") cfg.discount.deltaF = require_number(v, path, key);
        else if (key == "deltaP") cfg.discount.deltaP = require_number(v, path, key);
        else if (key == "lambdaF") cfg.discount.lambdaF = require_number(v, path, key);
        else if (key == "lambdaPN") cfg.discount.lambdaPN = require_number(v, path, key);
        else if (key == "lambdaPS") cfg.discount.lambdaPS = require_number(v, path, key);
        else if (key == "lambdaE") cfg.discount.lambdaE = require_number(v, path, key);
        else if (key == "numSelves") {
            const double n = require_number(v, path, key);
            if (n != static_cast<long>(n)) {
                throw ConfigError(path, 0, "numSelves must be an integer");
            }
            cfg.discount.numSelves = static_cast<int>(n);
        } else if (key == "parameter") {
            sawSweepKey = true;
            if (!v.is_string()) throw ConfigError(path, 0, "'parameter' must be a string");
            sweep.parameter = v.get<std::string>();
        } else if (key == "values") {
            sawSweepKey = true;
            if (!v.is_array()) throw ConfigError(path, 0, "'values' must be an array");
            for (const auto& e : v) sweep.values.push_back(require_number(e, path, key));
        } else if (key == "from") {
            sawSweepKey = true;
            from = require_number(v, path, key);
        } else if (key == "to") {
            sawSweepKey = true;
            to = require_number(v, path, key);
        } else if (key == "points") {
            sawSweepKey = true;
            points = static_cast<long>(require_number(v, path, key));
        } else if (key == "agents") {
            sawSweepKey = true;
            if (!v.is_array()) throw ConfigError(path, 0, "'agents' must be an array");
            for (const auto& e : v) {
                if (!e.is_string()) throw ConfigError(path, 0, "'agents' entries must be strings");
                try {
                    sweep.agents.push_back(agent_from_name(e.get<std::string>()));
                } catch (const std::invalid_argument& ex) {
                    throw ConfigError(path, 0, ex.what());
                }
            }
        } else if (key == "outputPath") {
            sawSweepKey = true;
            if (!v.is_string()) throw ConfigError(path, 0, "'outputPath' must be a string");
            sweep.outputPath = v.get<std::string>();
        } else {
            throw ConfigError(path, 0, "unknown key '" + key + "'");
        }
    }

    if (from || to || points) {
        if (!sweep.values.empty()) {
            throw ConfigError(path, 0, "'values' and 'from'/'to'/'points' are exclusive");
        }
        if (!(from && to && points)) {
            throw ConfigError(path, 0, "'from', 'to' and 'points' must appear together");
        }
        if (*points < 1) throw ConfigError(path, 0, "'points' must be >= 1");
        for (long i = 0; i < *points; ++i) {
            const double t = (*points == 1) ? 0.0
                                            : static_cast<double>(i) /
                                                  static_cast<double>(*points - 1);
            sweep.values.push_back(*from + t * (*to - *from));
        }
    }
    if (sawSweepKey) cfg.sweep = std::move(sweep);

    try {
        validate(cfg.params);
        validate(cfg.discount, cfg.allowDeltaInversion);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, 0, e.what());
    }
    return cfg;
}

std::string dump_config(const Config& cfg) {
    json doc = json::object();
    const ModelParams& p = cfg.params;
    const DiscountSpec& d = cfg.discount;
    doc["alpha"] = p.alpha;
    doc["sigma"] = p.sigma;
    doc["rho"] = p.rho;
    doc["qM"] = p.qM;
    doc["qA"] = p.qA;
    doc["qT"] = p.qT;
    doc["betaVC"] = p.betaVC;
    doc["phi"] = p.phi;
    doc["d"] = p.d;
    doc["cost"] = p.cost;
    doc["deltaF"] = d.deltaF;
    doc["deltaP"] = d.deltaP;
    doc["lambdaF"] = d.lambdaF;
    doc["lambdaPN"] = d.lambdaPN;
    doc["lambdaPS"] = d.lambdaPS;
    doc["lambdaE"] = d.lambdaE;
    doc["numSelves"] = d.numSelves;
    return doc.dump(2) + "\n";
}

void apply_parameter(const std::string& name, double value, ModelParams& p,
                     DiscountSpec& d) {
    if (name == "alpha") p.alpha = value;
    else if (name == "sigma") p.sigma = value;
    else if (name == "rho") p.rho = value;
    else if (name == "qM") p.qM = value;
    else if (name == "qA") p.qA = value;
    else if (name == "qT") p.qT = value;
    else if (name == "betaVC") p.betaVC = value;
    else if (name == "phi") p.phi = value;
    else if (name == "d") p.d = value;
    else if (name == "cost") p.cost = value;
    else if (name == "deltaF") d.deltaF = value;
    else if (name == "deltaP") d.deltaP = value;
    else if (name == "lambdaF") d.lambdaF = value;
    else if (name == "lambdaPN") d.lambdaPN = value;
    else if (name == "lambdaPS") d.lambdaPS = value;
    else if (name == "lambdaE") d.lambdaE = value;
    else if (name == "numSelves") {
        if (value != static_cast<long>(value)) {
            throw ConfigError("<sweep>", 0, "numSelves values must be integers");
        }
        d.numSelves = static_cast<int>(value);
    } else {
        throw ConfigError("<sweep>", 0, "unknown sweep parameter '" + name + "'");
    }
}

}  // namespace exitopt::cli
