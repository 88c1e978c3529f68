#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace streamseal {

// Canonical instant rendering: UTC ISO-8601, second precision, trailing "Z".
// Works for pre-1970 instants (negative epoch seconds).
std::string render_utc(std::int64_t epoch_seconds);

// Strict parse of the canonical form only ("YYYY-MM-DDTHH:MM:SSZ").
std::optional<std::int64_t> try_parse_utc(std::string_view iso);

// Normalizing parse: accepts fractional seconds (truncated) and numeric
// UTC offsets ("+HH:MM" / "-HH:MM") in addition to "Z".
// Throws InvalidTimestampError when the text cannot be normalized.
std::int64_t parse_timestamp(std::string_view text);

}  // namespace streamseal
