#pragma once

#include <filesystem>
#include <string>

#include "conrap/problem.hpp"

namespace conrap {

// JSON instance files:
//   {"n": int, "constraint": "inequality"|"equality", "b": float,
//    "l": [float], "u": [float],
//    "phi": [{"kind": str, ...params}], "g": [{"kind": str, ...params}]}
//
// Loading canonicalizes equality instances to positive coefficients
// (normalize_signs). Reals are written with round-trip precision.

ProblemInstance parse_instance(const std::string& json_text);
std::string instance_to_json(const ProblemInstance& instance, int indent = -1);

ProblemInstance load_instance(const std::filesystem::path& path);
void save_instance(const ProblemInstance& instance, const std::filesystem::path& path);

}  // namespace conrap
