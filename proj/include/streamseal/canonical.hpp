#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include <streamseal/parallel.hpp>
#include <streamseal/record.hpp>

namespace streamseal {

// Controls which top-level fields are dropped before serialization.
// "ingestMeta" is always dropped; the three required fields never are.
struct CanonicalConfig {
  std::set<std::string> exclude_fields;
};

// One canonical serialization, paired with the index of the record it came
// from so batch callers can map results back to their inputs.
struct CanonicalRecord {
  std::string bytes;
  std::size_t source_index = 0;
};

// The canonical JSON object for a record: required fields plus extras,
// minus exclusions, keys byte-sorted by the serializer.
nlohmann::json canonical_object(const Record& record, const CanonicalConfig& config);

// Serializes one record to its canonical byte string.
std::string canonicalize(const Record& record, const CanonicalConfig& config);

// Canonicalizes a batch, preserving input order in the output.
std::vector<CanonicalRecord> canonicalize_batch(const std::vector<Record>& records,
                                                const CanonicalConfig& config,
                                                ExecMode mode = ExecMode::Serial);

// Removes entries whose bytes duplicate an earlier entry, keeping the first
// occurrence and the original relative order.
std::vector<CanonicalRecord> dedupe(std::vector<CanonicalRecord> batch);

}  // namespace streamseal
