#include <streamseal/checkpoint.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include <streamseal/errors.hpp>
#include <streamseal/json_canon.hpp>
#include <streamseal/merkle.hpp>
#include <streamseal/time_iso.hpp>

namespace streamseal {

namespace {

constexpr const char* kRuntimeTag =
#if defined(__clang__)
    "linux-clang";
#elif defined(__GNUC__)
    "linux-gcc";
#else
    "unknown";
#endif

bool is_hex_digest(const std::string& text) {
  return from_hex(text).has_value();
}

std::string require_string(const nlohmann::json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError(std::string("checkpoint field missing or not text: ") + field);
  }
  return it->get<std::string>();
}

std::int64_t require_int(const nlohmann::json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_number_integer()) {
    throw ParseError(std::string("checkpoint field missing or not integer: ") + field);
  }
  return it->get<std::int64_t>();
}

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& checkpoint) {
  nlohmann::json obj;
  obj["blockchainStream"] = checkpoint.blockchain_stream;
  obj["merkleRoot"] = checkpoint.merkle_root;
  obj["offsetEnd"] = checkpoint.offset_end;
  obj["offsetStart"] = checkpoint.offset_start;
  obj["payloadPath"] = checkpoint.payload_path;
  obj["payloadSha256"] = checkpoint.payload_sha256;
  obj["recordCount"] = checkpoint.record_count;
  obj["sourceStream"] = checkpoint.source_stream;
  obj["windowEnd"] = checkpoint.window_end;
  obj["windowId"] = checkpoint.window_id;
  obj["windowStart"] = checkpoint.window_start;
  return canonical_json(obj);
}

Checkpoint checkpoint_from_json(const nlohmann::json& obj) {
  if (!obj.is_object()) {
    throw ParseError("checkpoint must be a JSON object");
  }
  static const std::vector<std::string> kFields = {
      "blockchainStream", "merkleRoot",  "offsetEnd",  "offsetStart",
      "payloadPath",      "payloadSha256", "recordCount", "sourceStream",
      "windowEnd",        "windowId",    "windowStart"};
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find(kFields.begin(), kFields.end(), key) == kFields.end()) {
      throw ParseError("unknown checkpoint field: " + key);
    }
  }

  Checkpoint cp;
  cp.blockchain_stream = require_string(obj, "blockchainStream");
  cp.merkle_root = require_string(obj, "merkleRoot");
  cp.offset_end = require_int(obj, "offsetEnd");
  cp.offset_start = require_int(obj, "offsetStart");
  cp.payload_path = require_string(obj, "payloadPath");
  cp.payload_sha256 = require_string(obj, "payloadSha256");
  cp.record_count = require_int(obj, "recordCount");
  cp.source_stream = require_string(obj, "sourceStream");
  cp.window_end = require_string(obj, "windowEnd");
  cp.window_id = require_string(obj, "windowId");
  cp.window_start = require_string(obj, "windowStart");

  if (cp.record_count < 0) {
    throw ParseError("recordCount must be non-negative");
  }
  if (cp.record_count > 0 && cp.offset_start > cp.offset_end) {
    throw ParseError("offsetStart exceeds offsetEnd");
  }
  if (!is_hex_digest(cp.payload_sha256)) {
    throw ParseError("payloadSha256 is not a 64-char hex digest");
  }
  if (!cp.merkle_root.empty() && !is_hex_digest(cp.merkle_root)) {
    throw ParseError("merkleRoot is not a 64-char hex digest");
  }
  auto start = try_parse_utc(cp.window_start);
  auto end = try_parse_utc(cp.window_end);
  if (!start || !end) {
    throw ParseError("window bounds are not ISO-8601 UTC timestamps");
  }
  WindowKey key{cp.source_stream, *start, *end};
  if (window_id(key) != cp.window_id) {
    throw ParseError("windowId does not match sourceStream and window bounds");
  }
  return cp;
}

Checkpoint checkpoint_from_json(const std::string& text) {
  auto obj = nlohmann::json::parse(text, nullptr, false);
  if (obj.is_discarded()) {
    throw ParseError("checkpoint is not valid JSON");
  }
  return checkpoint_from_json(obj);
}

std::string payload_filename(const WindowKey& key) {
  std::string name = key.source_stream + "_" + render_utc(key.start_time) + "_" +
                     render_utc(key.end_time) + ".json";
  std::replace(name.begin(), name.end(), ':', '_');
  return name;
}

std::filesystem::path write_payload(const WindowKey& key,
                                    const std::vector<CanonicalRecord>& canon,
                                    const std::filesystem::path& base_dir) {
  std::vector<std::string> lines;
  lines.reserve(canon.size());
  for (const auto& entry : canon) {
    lines.push_back(entry.bytes);
  }
  std::sort(lines.begin(), lines.end());

  std::string content;
  for (const auto& line : lines) {
    content += line;
    content += '\n';
  }

  std::error_code ec;
  std::filesystem::create_directories(base_dir, ec);
  auto path = base_dir / payload_filename(key);
  if (std::filesystem::exists(path)) {
    if (read_file_bytes(path) == content) {
      return path;  // idempotent re-seal
    }
    throw ExistsConflictError("payload already exists with different content: " +
                              path.string());
  }

  auto temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot write " + temp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.flush()) {
      throw IoError("write failed for " + temp.string());
    }
  }
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    throw IoError("rename failed for " + path.string() + ": " + ec.message());
  }
  return path;
}

Digest payload_hash(const std::filesystem::path& path) {
  return Digest::of(read_file_bytes(path));
}

std::optional<Checkpoint> build_checkpoint(const WindowKey& key,
                                           const std::vector<CanonicalRecord>& canon,
                                           std::int64_t offset_start,
                                           std::int64_t offset_end,
                                           const std::filesystem::path& payload_file,
                                           const std::string& payload_path_text,
                                           const std::string& stream_name,
                                           EmptyWindowPolicy policy) {
  if (canon.empty() && policy == EmptyWindowPolicy::Skip) {
    return std::nullopt;
  }

  std::vector<std::string> lines;
  lines.reserve(canon.size());
  for (const auto& entry : canon) {
    lines.push_back(entry.bytes);
  }
  auto root = merkle_root(lines);

  Checkpoint cp;
  cp.blockchain_stream = stream_name;
  cp.merkle_root = root ? root->hex() : "";
  cp.offset_end = offset_end;
  cp.offset_start = offset_start;
  cp.payload_path = payload_path_text;
  cp.payload_sha256 = payload_hash(payload_file).hex();
  cp.record_count = static_cast<std::int64_t>(canon.size());
  cp.source_stream = key.source_stream;
  cp.window_end = render_utc(key.end_time);
  cp.window_id = window_id(key);
  cp.window_start = render_utc(key.start_time);
  return cp;
}

void MirrorLog::append(const Checkpoint& checkpoint, const std::string& txid,
                       std::int64_t anchored_at) {
  if (!path_.parent_path().empty()) {
    std::error_code ec;
    std::filesystem::create_directories(path_.parent_path(), ec);
  }
  nlohmann::json row;
  row["anchoredAt"] = render_utc(anchored_at);
  row["checkpoint"] = nlohmann::json::parse(checkpoint_to_json(checkpoint));
  row["runtime"] = kRuntimeTag;
  row["txid"] = txid;

  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) {
    throw IoError("cannot append to " + path_.string());
  }
  out << canonical_json(row) << '\n';
  if (!out.flush()) {
    throw IoError("append failed for " + path_.string());
  }
}

std::vector<MirrorLog::Entry> MirrorLog::read_all() const {
  std::vector<Entry> entries;
  std::ifstream in(path_, std::ios::binary);
  if (!in) {
    return entries;  // absent log reads as empty
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    auto row = nlohmann::json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object() || !row.contains("checkpoint")) {
      throw ParseError(line_no, "malformed mirror-log line");
    }
    Entry entry;
    entry.checkpoint = checkpoint_from_json(row["checkpoint"]);
    entry.txid = row.value("txid", std::string{});
    if (row.contains("anchoredAt") && row["anchoredAt"].is_string()) {
      if (auto t = try_parse_utc(row["anchoredAt"].get<std::string>())) {
        entry.anchored_at = *t;
      }
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::optional<MirrorLog::Entry> MirrorLog::find(const std::string& window_id) const {
  std::optional<Entry> found;
  for (auto& entry : read_all()) {
    if (entry.checkpoint.window_id == window_id) {
      found = std::move(entry);
    }
  }
  return found;
}

}  // namespace streamseal
