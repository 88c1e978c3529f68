#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "streamseal/sha256.hpp"

namespace streamseal {

// 32-byte SHA-256 output. Ordered by raw byte value; rendered as 64-char
// lowercase hex everywhere a digest appears in a file or checkpoint.
struct Digest {
  std::array<std::uint8_t, 32> bytes{};

  std::string hex() const;
  static Digest of(std::string_view data) { return Digest{sha256(data)}; }
  static Digest of(const void* data, std::size_t len) { return Digest{sha256(data, len)}; }
  static std::optional<Digest> from_hex(std::string_view hex);

  auto operator<=>(const Digest&) const = default;
};

std::string to_hex(const std::uint8_t* data, std::size_t len);
std::string to_hex(std::string_view data);
// Returns nullopt on odd length or non-hex characters.
std::optional<std::string> from_hex(std::string_view hex);

}  // namespace streamseal
