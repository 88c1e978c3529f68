#include "streamseal/json_canon.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>

#include "streamseal/errors.hpp"

namespace streamseal {

namespace {

// Splits the shortest scientific rendering "d[.ddd]e±x" into its digit
// string and the exponent n, where value = 0.digits × 10^n.
void shortest_digits(double value, std::string& digits, int& n) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific);
  const std::string_view text(buf, std::size_t(res.ptr - buf));

  const auto epos = text.find('e');
  const std::string_view mant = text.substr(0, epos);
  std::size_t expstart = epos + 1;
  if (expstart < text.size() && text[expstart] == '+') ++expstart;
  int exp10 = 0;
  std::from_chars(text.data() + expstart, text.data() + text.size(), exp10);

  digits.clear();
  for (const char c : mant) {
    if (c != '.') digits.push_back(c);
  }
  // Mantissa is "d.ddd" with one leading digit, so the point sits after
  // digit 1 and value = 0.digits × 10^(exp10 + 1).
  n = exp10 + 1;
}

}  // namespace

std::string canonical_number(double value) {
  if (!std::isfinite(value)) {
    throw NonFiniteNumberError("canonical form has no representation for NaN or infinity");
  }
  if (value == 0.0) return "0";  // covers -0.0

  const bool negative = value < 0.0;
  std::string digits;
  int n = 0;
  shortest_digits(negative ? -value : value, digits, n);
  const int k = int(digits.size());

  std::string out;
  if (negative) out.push_back('-');

  if (k <= n && n <= 21) {
    out += digits;
    out.append(std::size_t(n - k), '0');
  } else if (0 < n && n <= 21) {
    out.append(digits, 0, std::size_t(n));
    out.push_back('.');
    out.append(digits, std::size_t(n), std::string::npos);
  } else if (-6 < n && n <= 0) {
    out += "0.";
    out.append(std::size_t(-n), '0');
    out += digits;
  } else {
    out.push_back(digits[0]);
    if (k > 1) {
      out.push_back('.');
      out.append(digits, 1, std::string::npos);
    }
    out.push_back('e');
    const int e = n - 1;
    out.push_back(e >= 0 ? '+' : '-');
    out += std::to_string(e >= 0 ? e : -e);
  }
  return out;
}

void append_canonical_string(std::string& out, std::string_view s) {
  static constexpr char kHex[] = "0123456789abcdef";
  out.push_back('"');
  for (const char c : s) {
    const auto u = static_cast<unsigned char>(c);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (u < 0x20) {
          out += "\\u00";
          out.push_back(kHex[u >> 4]);
          out.push_back(kHex[u & 0x0f]);
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void append_canonical_json(std::string& out, const nlohmann::json& value) {
  using value_t = nlohmann::json::value_t;
  switch (value.type()) {
    case value_t::null:
      out += "null";
      break;
    case value_t::boolean:
      out += value.get<bool>() ? "true" : "false";
      break;
    case value_t::number_integer:
      out += std::to_string(value.get<std::int64_t>());
      break;
    case value_t::number_unsigned:
      out += std::to_string(value.get<std::uint64_t>());
      break;
    case value_t::number_float:
      out += canonical_number(value.get<double>());
      break;
    case value_t::string:
      append_canonical_string(out, value.get_ref<const std::string&>());
      break;
    case value_t::array: {
      out.push_back('[');
      bool first = true;
      for (const auto& element : value) {
        if (!first) out.push_back(',');
        first = false;
        append_canonical_json(out, element);
      }
      out.push_back(']');
      break;
    }
    case value_t::object: {
      // nlohmann's object is a std::map keyed by byte order, so iteration
      // already yields ascending keys.
      out.push_back('{');
      bool first = true;
      for (const auto& [key, element] : value.items()) {
        if (!first) out.push_back(',');
        first = false;
        append_canonical_string(out, key);
        out.push_back(':');
        append_canonical_json(out, element);
      }
      out.push_back('}');
      break;
    }
    default:
      throw Error("unsupported JSON value type");
  }
}

std::string canonical_json(const nlohmann::json& value) {
  std::string out;
  append_canonical_json(out, value);
  return out;
}

}  // namespace streamseal
