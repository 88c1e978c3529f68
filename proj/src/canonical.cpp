#include <streamseal/canonical.hpp>

#include <unordered_set>
#include <utility>

#include <streamseal/json_canon.hpp>
#include <streamseal/time_iso.hpp>

namespace streamseal {

nlohmann::json canonical_object(const Record& record, const CanonicalConfig& config) {
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& [key, value] : record.extras.items()) {
    if (config.exclude_fields.count(key) == 0) {
      obj[key] = value;
    }
  }
  obj["sourceStream"] = record.source_stream;
  obj["timestamp"] = render_utc(record.event_time);
  obj["temperature"] = record.temperature;
  return obj;
}

std::string canonicalize(const Record& record, const CanonicalConfig& config) {
  return canonical_json(canonical_object(record, config));
}

std::vector<CanonicalRecord> canonicalize_batch(const std::vector<Record>& records,
                                                const CanonicalConfig& config,
                                                ExecMode mode) {
  std::vector<CanonicalRecord> out(records.size());
  if (use_parallel(mode, records.size())) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(records.size()); ++i) {
      auto idx = static_cast<std::size_t>(i);
      out[idx] = CanonicalRecord{canonicalize(records[idx], config), idx};
    }
  } else {
    for (std::size_t i = 0; i < records.size(); ++i) {
      out[i] = CanonicalRecord{canonicalize(records[i], config), i};
    }
  }
  return out;
}

std::vector<CanonicalRecord> dedupe(std::vector<CanonicalRecord> batch) {
  std::unordered_set<std::string> seen;
  std::vector<CanonicalRecord> out;
  out.reserve(batch.size());
  for (auto& entry : batch) {
    if (seen.insert(entry.bytes).second) {
      out.push_back(std::move(entry));
    }
  }
  return out;
}

}  // namespace streamseal
