#include <streamseal/decimal.hpp>

#include <charconv>
#include <cstddef>

#include <streamseal/errors.hpp>

namespace streamseal {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(int exponent) {
  cpp_int result = 1;
  for (int i = 0; i < exponent; ++i) {
    result *= 10;
  }
  return result;
}

}  // namespace

Decimal parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  auto fail = [&]() -> ParseError {
    return ParseError("not a decimal number: " + std::string(text));
  };

  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }

  cpp_int units = 0;
  bool any_digit = false;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    units = units * 10 + (text[pos] - '0');
    any_digit = true;
    ++pos;
  }

  int scale = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      units = units * 10 + (text[pos] - '0');
      ++scale;
      any_digit = true;
      ++pos;
    }
  }
  if (!any_digit) {
    throw fail();
  }

  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    if (pos < text.size() && text[pos] == '+') {
      ++pos;
    }
    int exponent = 0;
    auto [end, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), exponent);
    if (ec != std::errc() || end != text.data() + text.size()) {
      throw fail();
    }
    scale -= exponent;
    pos = text.size();
  }
  if (pos != text.size()) {
    throw fail();
  }

  if (scale < 0) {
    units *= pow10(-scale);
    scale = 0;
  }
  if (negative) {
    units = -units;
  }
  return Decimal{units, scale};
}

Decimal add(const Decimal& a, const Decimal& b) {
  if (a.scale == b.scale) {
    return Decimal{a.units + b.units, a.scale};
  }
  if (a.scale < b.scale) {
    return Decimal{a.units * pow10(b.scale - a.scale) + b.units, b.scale};
  }
  return Decimal{a.units + b.units * pow10(a.scale - b.scale), a.scale};
}

std::string render_mean(const Decimal& sum, std::int64_t count) {
  if (count < 1) {
    throw ParseError("mean requires count >= 1");
  }

  // hundredths = round_half_even(sum * 100 / count)
  bool negative = sum.units < 0;
  cpp_int numerator = (negative ? -sum.units : sum.units) * 100;
  cpp_int denominator = pow10(sum.scale) * count;
  cpp_int quotient = numerator / denominator;
  cpp_int remainder = numerator % denominator;
  cpp_int twice = remainder * 2;
  if (twice > denominator || (twice == denominator && (quotient % 2) != 0)) {
    ++quotient;
  }

  std::string digits = quotient.str();  // magnitude in hundredths
  while (digits.size() < 3) {
    digits.insert(digits.begin(), '0');
  }
  std::string whole = digits.substr(0, digits.size() - 2);
  std::string frac = digits.substr(digits.size() - 2);
  while (!frac.empty() && frac.back() == '0') {
    frac.pop_back();
  }

  std::string out;
  if (negative && (whole != "0" || !frac.empty())) {
    out += '-';
  }
  out += whole;
  if (!frac.empty()) {
    out += '.';
    out += frac;
  }
  return out;
}

}  // namespace streamseal
