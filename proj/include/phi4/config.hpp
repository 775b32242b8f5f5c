#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "phi4/experiments.hpp"

namespace phi4 {

// Error naming the offending key and line of a config file.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& key, int line, const std::string& what);
    std::string key;
    int line;
};

struct RunConfig {
    // model
    double g = 0.0, a = 0.0, beta = 0.0;
    ShapeSpec shape;
    // field
    FieldKind field = FieldKind::zero;
    FieldParams field_params;
    // bc: free or wired_plus (field-encoded for the samplers)
    std::string bc = "free";
    double bc_c0 = 1.0;
    // sampler
    McmcSpec mcmc;
    // experiment
    std::string experiment = "estimate_observable";
    std::map<std::string, std::string> params;
    std::string output = "results";
    bool log_samples = false;
};

// Experiments and their allowed parameter keys.
const std::map<std::string, std::vector<std::string>>& experiment_schema();

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize(const RunConfig& c);

// Typed accessors for experiment parameters; missing required keys throw
// ConfigError naming the key.
double param_double(const RunConfig& c, const std::string& key, std::optional<double> fallback = {});
int param_int(const RunConfig& c, const std::string& key, std::optional<int> fallback = {});
std::vector<int> param_ints(const RunConfig& c, const std::string& key);
std::vector<std::string> param_list(const RunConfig& c, const std::string& key,
                                    std::optional<std::vector<std::string>> fallback = {});
std::string param_string(const RunConfig& c, const std::string& key, std::optional<std::string> fallback = {});

}  // namespace phi4
