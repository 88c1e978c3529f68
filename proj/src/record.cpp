#include <streamseal/record.hpp>

#include <streamseal/errors.hpp>
#include <streamseal/time_iso.hpp>

namespace streamseal {

namespace {

std::int64_t timestamp_from_json(const nlohmann::json& value) {
  if (value.is_string()) {
    return parse_timestamp(value.get<std::string>());
  }
  if (value.is_number_integer()) {
    return value.get<std::int64_t>();
  }
  throw InvalidTimestampError("timestamp must be an ISO-8601 string or epoch seconds");
}

}  // namespace

Record record_from_json(const nlohmann::json& obj) {
  if (!obj.is_object()) {
    throw ParseError("record must be a JSON object");
  }

  Record record;
  bool saw_source = false;
  bool saw_timestamp = false;
  bool saw_temperature = false;

  for (const auto& [key, value] : obj.items()) {
    if (key == "sourceStream") {
      if (!value.is_string() || value.get<std::string>().empty()) {
        throw ParseError("sourceStream must be a non-empty string");
      }
      record.source_stream = value.get<std::string>();
      saw_source = true;
    } else if (key == "timestamp") {
      record.event_time = timestamp_from_json(value);
      saw_timestamp = true;
    } else if (key == "temperature") {
      if (!value.is_number()) {
        throw ParseError("temperature must be a number");
      }
      record.temperature = value.get<double>();
      saw_temperature = true;
    } else if (key == "ingestMeta") {
      if (!value.is_object()) {
        throw ParseError("ingestMeta must be an object");
      }
      record.ingest_meta = value;
    } else {
      record.extras[key] = value;
    }
  }

  if (!saw_source) {
    throw ParseError("missing required field sourceStream");
  }
  if (!saw_timestamp) {
    throw ParseError("missing required field timestamp");
  }
  if (!saw_temperature) {
    throw ParseError("missing required field temperature");
  }
  return record;
}

nlohmann::json record_to_json(const Record& record) {
  nlohmann::json obj = record.extras;
  obj["sourceStream"] = record.source_stream;
  obj["timestamp"] = render_utc(record.event_time);
  obj["temperature"] = record.temperature;
  if (!record.ingest_meta.empty()) {
    obj["ingestMeta"] = record.ingest_meta;
  }
  return obj;
}

std::int64_t record_offset(const Record& record) {
  auto it = record.ingest_meta.find("offset");
  if (it == record.ingest_meta.end() || !it->is_number_integer()) {
    return -1;
  }
  return it->get<std::int64_t>();
}

}  // namespace streamseal
