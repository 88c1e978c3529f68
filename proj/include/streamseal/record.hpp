#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace streamseal {

// One observation as ingested. `extras` holds any additional named fields
// from the input object; `ingest_meta` holds transport metadata (arrival
// order, per-source offset) that never enters the canonical form.
struct Record {
  std::string source_stream;
  std::int64_t event_time = 0;  // seconds since epoch, UTC
  double temperature = 0.0;
  nlohmann::json extras = nlohmann::json::object();
  nlohmann::json ingest_meta = nlohmann::json::object();
};

// Parses one NDJSON object into a Record. "sourceStream" (non-empty text),
// "timestamp" (ISO-8601 text or epoch seconds) and "temperature" (number)
// are required; "ingestMeta" is split off; everything else lands in extras.
Record record_from_json(const nlohmann::json& obj);

// Full round-trip form, including ingestMeta when non-empty.
nlohmann::json record_to_json(const Record& record);

// Per-source ingest offset, when the pipeline assigned one.
std::int64_t record_offset(const Record& record);

}  // namespace streamseal
