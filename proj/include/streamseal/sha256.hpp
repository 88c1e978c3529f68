#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace streamseal {

// Incremental SHA-256 (FIPS 180-4). Self-contained so the hashing kernels
// carry no per-call allocation and can run from any number of threads.
class Sha256 {
 public:
  static constexpr std::size_t kDigestSize = 32;

  Sha256() { reset(); }

  void reset();
  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }
  std::array<std::uint8_t, kDigestSize> finish();

 private:
  void process_block(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_{};
  std::uint64_t total_len_ = 0;
  std::array<std::uint8_t, 64> buffer_{};
  std::size_t buffer_len_ = 0;
};

std::array<std::uint8_t, Sha256::kDigestSize> sha256(const void* data, std::size_t len);

inline std::array<std::uint8_t, Sha256::kDigestSize> sha256(std::string_view s) {
  return sha256(s.data(), s.size());
}

}  // namespace streamseal
