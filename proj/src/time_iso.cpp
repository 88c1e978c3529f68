#include "streamseal/time_iso.hpp"

#include <chrono>
#include <cstdio>

#include "streamseal/errors.hpp"

namespace streamseal {

namespace {

namespace chrono = std::chrono;

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (i >= s.size() || s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

// Parses "YYYY-MM-DDTHH:MM:SS" at the front of `s`. Returns the epoch
// seconds of that civil time taken as UTC, and the index one past the
// seconds field, or nullopt on malformed text.
std::optional<std::pair<std::int64_t, std::size_t>> parse_civil_prefix(std::string_view s) {
  if (s.size() < 19) return std::nullopt;
  int year, month, day, hour, minute, second;
  if (!parse_fixed_uint(s, 0, 4, year) || s[4] != '-' || !parse_fixed_uint(s, 5, 2, month) ||
      s[7] != '-' || !parse_fixed_uint(s, 8, 2, day) || s[10] != 'T' ||
      !parse_fixed_uint(s, 11, 2, hour) || s[13] != ':' || !parse_fixed_uint(s, 14, 2, minute) ||
      s[16] != ':' || !parse_fixed_uint(s, 17, 2, second)) {
    return std::nullopt;
  }
  if (hour > 23 || minute > 59 || second > 59) return std::nullopt;

  const chrono::year_month_day ymd{chrono::year{year}, chrono::month{unsigned(month)},
                                   chrono::day{unsigned(day)}};
  if (!ymd.ok()) return std::nullopt;

  const chrono::sys_days days{ymd};
  const std::int64_t secs =
      std::int64_t(days.time_since_epoch().count()) * 86400 + hour * 3600 + minute * 60 + second;
  return std::make_pair(secs, std::size_t{19});
}

}  // namespace

std::string render_utc(std::int64_t epoch_seconds) {
  const chrono::sys_seconds tp{chrono::seconds{epoch_seconds}};
  const auto day_point = chrono::floor<chrono::days>(tp);
  const chrono::year_month_day ymd{day_point};
  const chrono::hh_mm_ss hms{tp - day_point};

  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()),
                static_cast<long long>(hms.hours().count()),
                static_cast<long long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

std::optional<std::int64_t> try_parse_utc(std::string_view iso) {
  const auto civil = parse_civil_prefix(iso);
  if (!civil) return std::nullopt;
  if (iso.size() != civil->second + 1 || iso[civil->second] != 'Z') return std::nullopt;
  return civil->first;
}

std::int64_t parse_timestamp(std::string_view text) {
  const auto civil = parse_civil_prefix(text);
  if (!civil) throw InvalidTimestampError("unparsable timestamp: " + std::string(text));

  std::int64_t secs = civil->first;
  std::size_t pos = civil->second;

  // Fractional seconds are truncated; the canonical form is second precision.
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) throw InvalidTimestampError("empty fraction in timestamp: " + std::string(text));
  }

  if (pos >= text.size()) throw InvalidTimestampError("missing UTC designator: " + std::string(text));

  if (text[pos] == 'Z') {
    if (pos + 1 != text.size()) {
      throw InvalidTimestampError("trailing characters in timestamp: " + std::string(text));
    }
    return secs;
  }

  if (text[pos] == '+' || text[pos] == '-') {
    const int sign = text[pos] == '+' ? 1 : -1;
    int oh = 0, om = 0;
    if (pos + 6 != text.size() || !parse_fixed_uint(text, pos + 1, 2, oh) ||
        text[pos + 3] != ':' || !parse_fixed_uint(text, pos + 4, 2, om) || oh > 23 || om > 59) {
      throw InvalidTimestampError("malformed UTC offset: " + std::string(text));
    }
    return secs - sign * (oh * 3600 + om * 60);
  }

  throw InvalidTimestampError("malformed timestamp: " + std::string(text));
}

}  // namespace streamseal
