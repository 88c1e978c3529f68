#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace streamseal {

// Window statistics rendered as decimal strings so that the sealing side
// and the auditing side compare byte-for-byte.
struct Aggregates {
  std::string min;
  std::string max;
  std::string avg;
  std::int64_t count = 0;
};

// Computes min/max/avg over the "temperature" field of canonical NDJSON
// lines. min/max keep the input rendering; avg is the exact-decimal mean
// rounded half-even to two places. Throws EmptyWindowError on no lines and
// ParseError on lines without a numeric temperature.
Aggregates compute_aggregates(const std::vector<std::string>& canonical_lines);

// One results-file NDJSON row:
// {"avg":…,"count":…,"max":…,"min":…,"scope":…,"windowId":…}
std::string aggregate_row(const std::string& scope, const std::string& window_id,
                          const Aggregates& aggregates);

}  // namespace streamseal
