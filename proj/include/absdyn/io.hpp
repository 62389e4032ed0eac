#pragma once

// JSON (de)serialization for measures and small file helpers. Schema:
//   {"type":"atomic","atoms":[[x,w],...]}
//   {"type":"grid","x_max":..,"n":..,"values":[..],"tail_mass":..}
//   {"type":"empirical","samples":[..]}

#include <string>

#include <json.hpp>

#include "absdyn/measures.hpp"

namespace absdyn {

nlohmann::json to_json(const Measure1D& m);
Measure1D measure_from_json(const nlohmann::json& j);

Measure1D load_measure(const std::string& path);
void save_measure(const Measure1D& m, const std::string& path);

/// Reads a whole file; throws Errc::io when missing/unreadable.
std::string read_file(const std::string& path);

/// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

/// Shortest round-trip decimal formatting for doubles ("%.17g" trimmed).
std::string format_double(double x);

}  // namespace absdyn
