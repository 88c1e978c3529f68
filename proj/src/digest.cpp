#include "streamseal/digest.hpp"

namespace streamseal {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

std::string to_hex(const std::uint8_t* data, std::size_t len) {
  std::string out;
  out.reserve(len * 2);
  for (std::size_t i = 0; i < len; ++i) {
    out.push_back(kHexDigits[data[i] >> 4]);
    out.push_back(kHexDigits[data[i] & 0x0f]);
  }
  return out;
}

std::string to_hex(std::string_view data) {
  return to_hex(reinterpret_cast<const std::uint8_t*>(data.data()), data.size());
}

std::optional<std::string> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = hex_value(hex[i]);
    const int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(char((hi << 4) | lo));
  }
  return out;
}

std::string Digest::hex() const { return to_hex(bytes.data(), bytes.size()); }

std::optional<Digest> Digest::from_hex(std::string_view hex) {
  if (hex.size() != 64) return std::nullopt;
  const auto raw = streamseal::from_hex(hex);
  if (!raw) return std::nullopt;
  Digest d;
  for (std::size_t i = 0; i < 32; ++i) d.bytes[i] = std::uint8_t((*raw)[i]);
  return d;
}

}  // namespace streamseal
