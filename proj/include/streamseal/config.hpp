#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <streamseal/checkpoint.hpp>
#include <streamseal/ledger_sim.hpp>
#include <streamseal/windowing.hpp>

namespace streamseal {

// Seeded synthetic weather source: a diurnal temperature curve plus noise,
// one reading per interval.
struct GeneratorSpec {
  std::uint64_t seed = 1;
  std::int64_t start_time = 1764547200;  // 2025-12-01T00:00:00Z
  std::int64_t hours = 48;
  std::int64_t interval_seconds = 600;
  double base_temp = 15.0;
  double amplitude = 8.0;
};

struct SourceSpec {
  std::string name;
  std::string stream;  // ledger stream for this source's checkpoints
  std::optional<std::string> file;
  std::optional<GeneratorSpec> generator;
};

// Merged view over all sources; windows of the region are sealed and
// anchored exactly like per-source windows.
struct RegionSpec {
  std::string name;
  std::string stream;
};

struct LedgerSpec {
  std::string backend = "sim";  // "sim" | "rpc"
  std::string endpoint;         // journal path (sim) or URL (rpc)
  std::int64_t block_interval_seconds = 15;
  std::int64_t block_capacity = 0;
  std::vector<std::string> miners;
  std::int64_t publish_latency_micros = 0;
  std::int64_t validation_nanos_per_byte = 0;
  std::int64_t max_item_bytes = 2 * 1024 * 1024;
  std::set<std::string> deny_streams;
  std::string rpc_user;
  std::string rpc_password;
};

struct ToolConfig {
  WindowSpec window;
  std::vector<SourceSpec> sources;
  std::optional<RegionSpec> region;
  LedgerSpec ledger;
  std::string payload_base_dir = "Files/payloads";
  std::set<std::string> exclude_fields;
  EmptyWindowPolicy empty_window_policy = EmptyWindowPolicy::Skip;

  // Directory of the config file; every relative path resolves against it.
  std::filesystem::path config_dir;

  std::filesystem::path resolve(const std::string& path_text) const;
  std::filesystem::path payload_dir() const;
  // checkpoints.ndjson / results.ndjson / parked.ndjson next to the payload
  // directory.
  std::filesystem::path mirror_log_path() const;
  std::filesystem::path results_path() const;
  std::filesystem::path parked_path() const;
  // Streams of all sources plus the region, in configuration order.
  std::vector<std::string> all_streams() const;
};

// Parses and validates a config file. Unknown keys, missing required keys,
// and malformed values fail with path-qualified messages
// ("ledger.backend: ..."). Credentials may be overridden by the
// STREAMSEAL_RPC_USER / STREAMSEAL_RPC_PASSWORD environment variables.
ToolConfig load_config(const std::filesystem::path& path);

// The same validation over an already-parsed document (tests).
ToolConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& config_dir);

}  // namespace streamseal
