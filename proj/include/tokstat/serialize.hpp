#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace tokstat {

// Fixed six-decimal rendering used for every real number we emit, so golden
// files are stable across platforms. Negative zero prints as 0.000000.
std::string format_fixed(double value);

// Deterministic JSON text: object keys sorted, integers raw, floating-point
// numbers through format_fixed, two-space indentation, trailing newline.
std::string dump_json(const nlohmann::json& value);

}  // namespace tokstat
