#pragma once

#include <string>

#include "deltabound/geometry.hpp"

namespace deltabound {

// Parses the JSON configuration document:
//   {"model": {"kind": "flat"|"hyperbolic"|"generic", ...},
//    "constants": {"hbar": h, "mass": m},      (optional, natural units default)
//    "d_min": d,
//    "centers": [{"x": x, "y": y, "mu": mu}, ...]}
// Parsing is strict: unknown keys are rejected, the first violation is
// reported with its location. The returned Configuration carries the
// model and unit constants.
Configuration parse_config_text(const std::string& text);
Configuration parse_config_file(const std::string& path);

// Inverse of the parser; numbers carry 17 significant digits so a
// write/parse round trip reproduces every coordinate bit-exactly.
std::string configuration_to_json(const Configuration& config);
void write_config_file(const Configuration& config, const std::string& path);

}  // namespace deltabound
