#pragma once

#include <string>

#include <json.hpp>

namespace twirlab {

using Json = nlohmann::json;

// Sorted keys; integers as integers; other numbers with 17 significant
// digits ("%.17g"), integral doubles printed without exponent or fraction
// and -0 printed as 0.  Pretty output puts scalar arrays on one line.
std::string canonical_json(const Json& j, bool pretty = true);

std::string format_number(double v);

// Lowercase hex SHA-256 of the bytes of `data`.
std::string sha256_hex(const std::string& data);

}  // namespace twirlab
