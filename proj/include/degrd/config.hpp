#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "degrd/solver.hpp"

namespace degrd {

// Parse or validation failure. line is 0 when the problem is not tied to one line.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& origin, int line, std::string key, const std::string& message);
    int line = 0;
    std::string key;  // "section.key", empty for syntax errors
};

// INI text with sections domain, grid, physics, catalyst, initial, stepper, weight, output.
// Unknown sections or keys are errors. Validated before returning.
SimConfig parse_config(const std::string& text, const std::string& origin = "<config>");
SimConfig load_config(const std::string& path);

// Sets one "section.key" from its textual value; throws ConfigError on bad keys or values.
void set_config_value(SimConfig& config, const std::string& dotted_key, const std::string& value);
std::string get_config_value(const SimConfig& config, const std::string& dotted_key);
std::vector<std::string> config_keys();

// Canonical INI of every key; parse_config(to_ini(c)) reproduces c.
std::string to_ini(const SimConfig& config);

}  // namespace degrd
