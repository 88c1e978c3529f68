#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace streamseal {

// Tumbling window layout shared by the pipeline and the auditor.
struct WindowSpec {
  std::int64_t duration_seconds = 7200;
  std::int64_t grace_seconds = 0;
};

// Identifies one window of one source stream. Bounds are half-open:
// [start_time, end_time).
struct WindowKey {
  std::string source_stream;
  std::int64_t start_time = 0;
  std::int64_t end_time = 0;

  bool operator==(const WindowKey&) const = default;
  auto operator<=>(const WindowKey&) const = default;
};

// Epoch-aligned window index: floor(t / duration), exact for negative times.
std::int64_t window_index(std::int64_t event_time, std::int64_t duration_seconds);

// Maps an event to its window. Throws ConfigError if duration is not positive.
WindowKey assign_window(const std::string& source_stream, std::int64_t event_time,
                        const WindowSpec& spec);

// "<source>:<startISO>_<endISO>", both bounds second-precision UTC.
std::string window_id(const WindowKey& key);

// Inverse of window_id. Scans source-embedded colons from the right so
// sources containing ':' parse correctly. Returns nullopt on malformed input.
std::optional<WindowKey> parse_window_id(const std::string& id);

}  // namespace streamseal
