#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace streamseal {

// Unique decimal rendering for a finite double: shortest digit string that
// round-trips, plain notation for magnitudes in [1e-6, 1e21), lowercase "e"
// exponent outside that range, integers without a fraction part, and -0
// collapsed to "0". Throws NonFiniteNumberError on NaN or infinities.
std::string canonical_number(double value);

// JSON string escaping with a single spelling per character: \" \\ \b \f
// \n \r \t, \u00xx (lowercase hex) for remaining control characters, all
// other bytes passed through as UTF-8.
void append_canonical_string(std::string& out, std::string_view s);

// Serializes a JSON value with object keys in ascending byte order at every
// level, canonical number rendering, and no whitespace between tokens.
std::string canonical_json(const nlohmann::json& value);
void append_canonical_json(std::string& out, const nlohmann::json& value);

}  // namespace streamseal
