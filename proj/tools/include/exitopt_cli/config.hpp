#pragma once

#include "exitopt/params.hpp"
#include "exitopt/solvers.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace exitopt::cli {

// Configuration or sweep-spec problem; carries a 1-based line number when the
// failure is attributable to a location in the file (0 otherwise).
struct ConfigError : std::runtime_error {
    ConfigError(std::string path, int line, const std::string& what);
    std::string path;
    int line;
};

struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
    std::vector<AgentType> agents;
    std::string outputPath;
};

struct Config {
    ModelParams params;
    DiscountSpec discount;
    bool allowDeltaInversion = false;
    std::optional<SweepSpec> sweep;
};

// Parses a flat JSON config with exactly the field names of ModelParams and
// DiscountSpec plus the optional sweep keys (parameter, values or
// from/to/points, agents, outputPath). Unknown keys are a hard error.
Config load_config(const std::string& path);

// Serializes params and discount back to the flat JSON format; the result
// re-parses to identical values.
std::string dump_config(const Config& cfg);

// Applies a named swept parameter; throws ConfigError for unknown names or
// non-integer numSelves values.
void apply_parameter(const std::string& name, double value, ModelParams& p,
                     DiscountSpec& d);

AgentType agent_from_name(const std::string& name);

// Numbers are printed with 10 significant digits everywhere the CLI writes
// them, so outputs diff cleanly.
std::string format_number(double v);

}  // namespace exitopt::cli
