#include <streamseal/generator.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include <streamseal/errors.hpp>
#include <streamseal/time_iso.hpp>

namespace streamseal {

namespace {

double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string station_name(int index) {
  switch (index) {
    case 0:
      return "Berlin Brandenburg";
    case 1:
      return "Berlin Tempelhof";
    default:
      return "Berlin Station" + std::to_string(index + 1);
  }
}

std::string stream_for(const std::string& name) {
  auto pos = name.rfind(' ');
  return (pos == std::string::npos ? name : name.substr(pos + 1)) + "Check";
}

}  // namespace

std::vector<Record> generate_records(const std::string& source_name,
                                     const std::string& station_id,
                                     const GeneratorSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::int64_t count = spec.hours * 3600 / spec.interval_seconds;
  std::vector<Record> records;
  records.reserve(static_cast<std::size_t>(count));
  constexpr double kTau = 6.283185307179586;

  for (std::int64_t i = 0; i < count; ++i) {
    std::int64_t t = spec.start_time + i * spec.interval_seconds;
    double hour_of_day = static_cast<double>(((t % 86400) + 86400) % 86400) / 3600.0;
    double noise = unit_interval(rng) * 3.0 - 1.5;
    double raw = spec.base_temp + spec.amplitude * std::sin(kTau * (hour_of_day - 9.0) / 24.0) +
                 noise;
    Record record;
    record.source_stream = source_name;
    record.event_time = t;
    record.temperature = std::round(raw * 10.0) / 10.0;
    record.extras["humidityPct"] = static_cast<std::int64_t>(30 + rng() % 61);
    record.extras["stationId"] = station_id;
    records.push_back(std::move(record));
  }
  return records;
}

std::filesystem::path write_generated_corpus(const std::filesystem::path& out_dir,
                                             std::uint64_t seed, int stations,
                                             std::int64_t hours,
                                             std::int64_t interval_seconds,
                                             std::int64_t start_time) {
  if (stations < 1) {
    throw ConfigError("gen: stations must be at least 1");
  }
  if (hours <= 0 || interval_seconds <= 0) {
    throw ConfigError("gen: hours and interval must be positive");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  nlohmann::json sources = nlohmann::json::array();
  for (int i = 0; i < stations; ++i) {
    std::string name = station_name(i);
    char sid[16];
    std::snprintf(sid, sizeof(sid), "ST-%02d", i + 1);

    GeneratorSpec spec;
    spec.seed = seed * 1000003ULL + static_cast<std::uint64_t>(i);
    spec.start_time = start_time;
    spec.hours = hours;
    spec.interval_seconds = interval_seconds;
    auto records = generate_records(name, sid, spec);

    std::string filename = name;
    std::replace(filename.begin(), filename.end(), ' ', '_');
    filename += ".ndjson";
    std::ofstream out(out_dir / filename, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot write " + (out_dir / filename).string());
    }
    for (const auto& record : records) {
      out << record_to_json(record).dump() << '\n';
    }
    if (!out.flush()) {
      throw IoError("write failed for " + (out_dir / filename).string());
    }

    nlohmann::json source;
    source["name"] = name;
    source["stream"] = stream_for(name);
    source["file"] = filename;
    sources.push_back(source);
  }

  nlohmann::json config;
  config["window"] = {{"durationSeconds", 7200}, {"graceSeconds", 0}};
  config["sources"] = sources;
  config["region"] = {{"name", "Berlin"}, {"stream", "BerlinCheck"}};
  config["ledger"] = {{"backend", "sim"}, {"endpoint", "Files/ledger.ndjson"}};
  config["payload"] = {{"baseDir", "Files/payloads"}};
  config["canonical"] = {{"excludeFields", nlohmann::json::array()}};
  config["emptyWindowPolicy"] = "skip";

  auto config_path = out_dir / "config.json";
  std::ofstream out(config_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + config_path.string());
  }
  out << config.dump(2) << '\n';
  if (!out.flush()) {
    throw IoError("write failed for " + config_path.string());
  }
  return config_path;
}

}  // namespace streamseal
