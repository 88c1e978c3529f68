#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <streamseal/canonical.hpp>
#include <streamseal/digest.hpp>
#include <streamseal/windowing.hpp>

namespace streamseal {

// On-chain record for one sealed window. Field names match the published
// JSON object one to one.
struct Checkpoint {
  std::string blockchain_stream;
  std::string merkle_root;  // 64-char hex, empty when the window was empty
  std::int64_t offset_end = 0;
  std::int64_t offset_start = 0;
  std::string payload_path;
  std::string payload_sha256;
  std::int64_t record_count = 0;
  std::string source_stream;
  std::string window_end;    // ISO-8601 UTC
  std::string window_id;
  std::string window_start;  // ISO-8601 UTC

  bool operator==(const Checkpoint&) const = default;
};

enum class EmptyWindowPolicy { Skip, Anchor };

// Canonical JSON bytes of the checkpoint (keys sorted, no whitespace).
std::string checkpoint_to_json(const Checkpoint& checkpoint);

// Parses and validates a checkpoint object; rejects missing or unknown
// fields and malformed formats (hex digests, timestamps, windowId grammar).
Checkpoint checkpoint_from_json(const nlohmann::json& obj);
Checkpoint checkpoint_from_json(const std::string& text);

// "<source>_<startISO'>_<endISO'>.json" with ':' replaced by '_'.
std::string payload_filename(const WindowKey& key);

// Writes one canonical line per record, sorted by byte value, LF endings,
// atomically (temp file + rename). Re-writing identical content is a no-op;
// differing content at the same path raises ExistsConflictError.
// Returns the file's full path.
std::filesystem::path write_payload(const WindowKey& key,
                                    const std::vector<CanonicalRecord>& canon,
                                    const std::filesystem::path& base_dir);

// SHA-256 over the file's exact bytes.
Digest payload_hash(const std::filesystem::path& path);

// Assembles the checkpoint for a written payload. `canon` must already be
// deduplicated; `payload_path_text` is the path string to record on-chain
// (kept as configured, not resolved). Returns nullopt when the window is
// empty and the policy says skip.
std::optional<Checkpoint> build_checkpoint(const WindowKey& key,
                                           const std::vector<CanonicalRecord>& canon,
                                           std::int64_t offset_start,
                                           std::int64_t offset_end,
                                           const std::filesystem::path& payload_file,
                                           const std::string& payload_path_text,
                                           const std::string& stream_name,
                                           EmptyWindowPolicy policy);

// Append-only off-chain log of anchored checkpoints, one JSON object per
// line: {anchoredAt, checkpoint, runtime, txid}.
class MirrorLog {
 public:
  explicit MirrorLog(std::filesystem::path path) : path_(std::move(path)) {}

  void append(const Checkpoint& checkpoint, const std::string& txid,
              std::int64_t anchored_at);

  struct Entry {
    Checkpoint checkpoint;
    std::string txid;
    std::int64_t anchored_at = 0;
  };

  // All entries in file order; malformed lines raise ParseError.
  std::vector<Entry> read_all() const;

  // Last entry for a windowId, or nullopt.
  std::optional<Entry> find(const std::string& window_id) const;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace streamseal
