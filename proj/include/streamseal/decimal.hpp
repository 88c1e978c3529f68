#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace streamseal {

// Exact decimal value: units * 10^-scale. Scale is kept non-negative;
// exponent notation is folded into the units at parse time.
struct Decimal {
  boost::multiprecision::cpp_int units;
  int scale = 0;
};

// Parses a JSON-style number ("21", "-3.5", "1.5e+21", "1e-7").
// Throws ParseError on anything else.
Decimal parse_decimal(std::string_view text);

Decimal add(const Decimal& a, const Decimal& b);

// sum/count rounded half-even to two decimal places, rendered with
// trailing zeros trimmed ("21.00" renders as "21"). count must be >= 1.
std::string render_mean(const Decimal& sum, std::int64_t count);

}  // namespace streamseal
