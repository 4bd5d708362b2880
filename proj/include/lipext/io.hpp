#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "lipext/matrix.hpp"
#include "lipext/metric_core.hpp"

namespace lipext::io {

using nlohmann::json;

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);
/// Strict parse of one decimal number; throws ValidationError.
double parse_double(std::string_view text);

/// {"n": int, "dist": [[...]]}
json space_to_json(const QuasiMetricSpace& space);
QuasiMetricSpace space_from_json(const json& j);

/// n lines of n comma-separated values, shortest round-trip formatting.
std::string matrix_to_csv(const Matrix& m);
Matrix matrix_from_csv(std::string_view text);

json matrix_to_json(const Matrix& m);
/// Accepts a nested array of numbers; throws ValidationError otherwise.
Matrix matrix_from_json(const json& j);

/// Reads a whole file; throws ValidationError naming the path on failure.
std::string read_file(const std::string& path);
json read_json_file(const std::string& path);

} // namespace lipext::io
