#include <streamseal/config.hpp>

#include <cstdlib>
#include <fstream>
#include <set>

#include <streamseal/errors.hpp>
#include <streamseal/time_iso.hpp>

namespace streamseal {

namespace {

void require_keys(const nlohmann::json& obj, const std::string& prefix,
                  const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (allowed.count(key) == 0) {
      throw ConfigError(prefix + key + ": unknown key");
    }
  }
}

std::int64_t get_int(const nlohmann::json& obj, const std::string& prefix,
                     const std::string& key, std::int64_t fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    return fallback;
  }
  if (!it->is_number_integer()) {
    throw ConfigError(prefix + key + ": must be an integer");
  }
  return it->get<std::int64_t>();
}

double get_double(const nlohmann::json& obj, const std::string& prefix,
                  const std::string& key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    return fallback;
  }
  if (!it->is_number()) {
    throw ConfigError(prefix + key + ": must be a number");
  }
  return it->get<double>();
}

std::string get_string(const nlohmann::json& obj, const std::string& prefix,
                       const std::string& key, bool required,
                       const std::string& fallback = {}) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) {
      throw ConfigError(prefix + key + ": missing required key");
    }
    return fallback;
  }
  if (!it->is_string()) {
    throw ConfigError(prefix + key + ": must be text");
  }
  return it->get<std::string>();
}

GeneratorSpec parse_generator(const nlohmann::json& obj, const std::string& prefix) {
  if (!obj.is_object()) {
    throw ConfigError(prefix + ": must be an object");
  }
  require_keys(obj, prefix + ".",
               {"seed", "startTime", "hours", "intervalSeconds", "baseTemp",
                "amplitude"});
  GeneratorSpec spec;
  spec.seed = static_cast<std::uint64_t>(get_int(obj, prefix + ".", "seed", 1));
  if (obj.contains("startTime")) {
    auto text = get_string(obj, prefix + ".", "startTime", false);
    auto parsed = try_parse_utc(text);
    if (!parsed) {
      throw ConfigError(prefix + ".startTime: not an ISO-8601 UTC timestamp");
    }
    spec.start_time = *parsed;
  }
  spec.hours = get_int(obj, prefix + ".", "hours", spec.hours);
  spec.interval_seconds = get_int(obj, prefix + ".", "intervalSeconds",
                                  spec.interval_seconds);
  spec.base_temp = get_double(obj, prefix + ".", "baseTemp", spec.base_temp);
  spec.amplitude = get_double(obj, prefix + ".", "amplitude", spec.amplitude);
  if (spec.hours <= 0 || spec.interval_seconds <= 0) {
    throw ConfigError(prefix + ": hours and intervalSeconds must be positive");
  }
  return spec;
}

}  // namespace

std::filesystem::path ToolConfig::resolve(const std::string& path_text) const {
  std::filesystem::path p(path_text);
  if (p.is_absolute()) {
    return p;
  }
  return config_dir / p;
}

std::filesystem::path ToolConfig::payload_dir() const {
  return resolve(payload_base_dir);
}

std::filesystem::path ToolConfig::mirror_log_path() const {
  return payload_dir().parent_path() / "checkpoints.ndjson";
}

std::filesystem::path ToolConfig::results_path() const {
  return payload_dir().parent_path() / "results.ndjson";
}

std::filesystem::path ToolConfig::parked_path() const {
  return payload_dir().parent_path() / "parked.ndjson";
}

std::vector<std::string> ToolConfig::all_streams() const {
  std::vector<std::string> streams;
  for (const auto& source : sources) {
    streams.push_back(source.stream);
  }
  if (region) {
    streams.push_back(region->stream);
  }
  return streams;
}

ToolConfig parse_config(const nlohmann::json& doc,
                        const std::filesystem::path& config_dir) {
  if (!doc.is_object()) {
    throw ConfigError("config root must be a JSON object");
  }
  require_keys(doc, "",
               {"window", "sources", "region", "ledger", "payload", "canonical",
                "emptyWindowPolicy"});

  ToolConfig config;
  config.config_dir = config_dir;

  if (!doc.contains("window") || !doc["window"].is_object()) {
    throw ConfigError("window: missing required object");
  }
  const auto& window = doc["window"];
  require_keys(window, "window.", {"durationSeconds", "graceSeconds"});
  config.window.duration_seconds =
      get_int(window, "window.", "durationSeconds", 0);
  config.window.grace_seconds = get_int(window, "window.", "graceSeconds", 0);
  if (config.window.duration_seconds <= 0) {
    throw ConfigError("window.durationSeconds: must be a positive integer");
  }
  if (config.window.grace_seconds < 0) {
    throw ConfigError("window.graceSeconds: must be non-negative");
  }

  if (!doc.contains("sources") || !doc["sources"].is_array() ||
      doc["sources"].empty()) {
    throw ConfigError("sources: must be a non-empty array");
  }
  std::set<std::string> names;
  std::size_t index = 0;
  for (const auto& entry : doc["sources"]) {
    std::string prefix = "sources[" + std::to_string(index) + "].";
    if (!entry.is_object()) {
      throw ConfigError("sources[" + std::to_string(index) + "]: must be an object");
    }
    require_keys(entry, prefix, {"name", "stream", "file", "generator"});
    SourceSpec source;
    source.name = get_string(entry, prefix, "name", true);
    source.stream = get_string(entry, prefix, "stream", true);
    if (source.name.empty()) {
      throw ConfigError(prefix + "name: must be non-empty");
    }
    if (!names.insert(source.name).second) {
      throw ConfigError(prefix + "name: duplicate source name " + source.name);
    }
    if (entry.contains("file")) {
      source.file = get_string(entry, prefix, "file", false);
    }
    if (entry.contains("generator")) {
      source.generator = parse_generator(entry["generator"], prefix + "generator");
    }
    if (source.file.has_value() == source.generator.has_value()) {
      throw ConfigError(prefix + "input: exactly one of file or generator is required");
    }
    config.sources.push_back(std::move(source));
    ++index;
  }

  if (doc.contains("region")) {
    const auto& region = doc["region"];
    if (!region.is_object()) {
      throw ConfigError("region: must be an object");
    }
    require_keys(region, "region.", {"name", "stream"});
    RegionSpec spec;
    spec.name = get_string(region, "region.", "name", true);
    spec.stream = get_string(region, "region.", "stream", true);
    if (names.count(spec.name) != 0) {
      throw ConfigError("region.name: collides with a source name");
    }
    config.region = std::move(spec);
  }

  if (!doc.contains("ledger") || !doc["ledger"].is_object()) {
    throw ConfigError("ledger: missing required object");
  }
  const auto& ledger = doc["ledger"];
  require_keys(ledger, "ledger.",
               {"backend", "endpoint", "blockIntervalSeconds", "blockCapacity",
                "miners", "publishLatencyMicros", "validationNanosPerByte",
                "maxItemBytes", "denyStreams", "rpcUser", "rpcPassword"});
  config.ledger.backend = get_string(ledger, "ledger.", "backend", true);
  if (config.ledger.backend != "sim" && config.ledger.backend != "rpc") {
    throw ConfigError("ledger.backend: must be \"sim\" or \"rpc\"");
  }
  config.ledger.endpoint = get_string(ledger, "ledger.", "endpoint", true);
  config.ledger.block_interval_seconds =
      get_int(ledger, "ledger.", "blockIntervalSeconds", 15);
  config.ledger.block_capacity = get_int(ledger, "ledger.", "blockCapacity", 0);
  if (ledger.contains("miners")) {
    if (!ledger["miners"].is_array()) {
      throw ConfigError("ledger.miners: must be an array of text");
    }
    for (const auto& miner : ledger["miners"]) {
      if (!miner.is_string()) {
        throw ConfigError("ledger.miners: must be an array of text");
      }
      config.ledger.miners.push_back(miner.get<std::string>());
    }
  }
  config.ledger.publish_latency_micros =
      get_int(ledger, "ledger.", "publishLatencyMicros", 0);
  config.ledger.validation_nanos_per_byte =
      get_int(ledger, "ledger.", "validationNanosPerByte", 0);
  config.ledger.max_item_bytes =
      get_int(ledger, "ledger.", "maxItemBytes", config.ledger.max_item_bytes);
  if (ledger.contains("denyStreams")) {
    if (!ledger["denyStreams"].is_array()) {
      throw ConfigError("ledger.denyStreams: must be an array of text");
    }
    for (const auto& name : ledger["denyStreams"]) {
      if (!name.is_string()) {
        throw ConfigError("ledger.denyStreams: must be an array of text");
      }
      config.ledger.deny_streams.insert(name.get<std::string>());
    }
  }
  config.ledger.rpc_user = get_string(ledger, "ledger.", "rpcUser", false);
  config.ledger.rpc_password = get_string(ledger, "ledger.", "rpcPassword", false);
  if (const char* user = std::getenv("STREAMSEAL_RPC_USER")) {
    config.ledger.rpc_user = user;
  }
  if (const char* password = std::getenv("STREAMSEAL_RPC_PASSWORD")) {
    config.ledger.rpc_password = password;
  }
  if (config.ledger.block_interval_seconds <= 0) {
    throw ConfigError("ledger.blockIntervalSeconds: must be positive");
  }

  if (!doc.contains("payload") || !doc["payload"].is_object()) {
    throw ConfigError("payload: missing required object");
  }
  require_keys(doc["payload"], "payload.", {"baseDir"});
  config.payload_base_dir = get_string(doc["payload"], "payload.", "baseDir", true);

  if (doc.contains("canonical")) {
    const auto& canonical = doc["canonical"];
    if (!canonical.is_object()) {
      throw ConfigError("canonical: must be an object");
    }
    require_keys(canonical, "canonical.", {"excludeFields"});
    if (canonical.contains("excludeFields")) {
      if (!canonical["excludeFields"].is_array()) {
        throw ConfigError("canonical.excludeFields: must be an array of text");
      }
      for (const auto& field : canonical["excludeFields"]) {
        if (!field.is_string()) {
          throw ConfigError("canonical.excludeFields: must be an array of text");
        }
        config.exclude_fields.insert(field.get<std::string>());
      }
    }
  }

  if (doc.contains("emptyWindowPolicy")) {
    auto policy = get_string(doc, "", "emptyWindowPolicy", false);
    if (policy == "skip") {
      config.empty_window_policy = EmptyWindowPolicy::Skip;
    } else if (policy == "anchor") {
      config.empty_window_policy = EmptyWindowPolicy::Anchor;
    } else {
      throw ConfigError("emptyWindowPolicy: must be \"skip\" or \"anchor\"");
    }
  }

  return config;
}

ToolConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read config file " + path.string());
  }
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    throw ConfigError("config file is not valid JSON: " + path.string());
  }
  auto dir = path.parent_path();
  if (dir.empty()) {
    dir = ".";
  }
  return parse_config(doc, dir);
}

}  // namespace streamseal
