#include <streamseal/windowing.hpp>

#include <streamseal/errors.hpp>
#include <streamseal/time_iso.hpp>

namespace streamseal {

std::int64_t window_index(std::int64_t event_time, std::int64_t duration_seconds) {
  std::int64_t quotient = event_time / duration_seconds;
  if (event_time % duration_seconds != 0 && (event_time < 0) != (duration_seconds < 0)) {
    --quotient;
  }
  return quotient;
}

WindowKey assign_window(const std::string& source_stream, std::int64_t event_time,
                        const WindowSpec& spec) {
  if (spec.duration_seconds <= 0) {
    throw ConfigError("window duration must be positive");
  }
  std::int64_t index = window_index(event_time, spec.duration_seconds);
  WindowKey key;
  key.source_stream = source_stream;
  key.start_time = index * spec.duration_seconds;
  key.end_time = key.start_time + spec.duration_seconds;
  return key;
}

std::string window_id(const WindowKey& key) {
  return key.source_stream + ":" + render_utc(key.start_time) + "_" +
         render_utc(key.end_time);
}

std::optional<WindowKey> parse_window_id(const std::string& id) {
  // Try each ':' from the right; the suffix after the accepted one must be
  // exactly "<ISO>_<ISO>".
  for (auto pos = id.rfind(':'); pos != std::string::npos;
       pos = (pos == 0) ? std::string::npos : id.rfind(':', pos - 1)) {
    if (pos == 0) {
      break;  // empty source
    }
    std::string suffix = id.substr(pos + 1);
    auto sep = suffix.find('_');
    if (sep == std::string::npos) {
      continue;
    }
    auto start = try_parse_utc(suffix.substr(0, sep));
    auto end = try_parse_utc(suffix.substr(sep + 1));
    if (start && end) {
      WindowKey key;
      key.source_stream = id.substr(0, pos);
      key.start_time = *start;
      key.end_time = *end;
      return key;
    }
  }
  return std::nullopt;
}

}  // namespace streamseal
