#include <streamseal/auditor.hpp>

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <streamseal/aggregates.hpp>
#include <streamseal/errors.hpp>
#include <streamseal/json_canon.hpp>
#include <streamseal/merkle.hpp>

namespace streamseal {

namespace {

const char* state_name(CheckState state) {
  switch (state) {
    case CheckState::Pass:
      return "Pass";
    case CheckState::Fail:
      return "Fail";
    default:
      return "Skipped";
  }
}

std::int64_t now_nanos() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

CheckResult pass(std::string expected, std::string actual) {
  return CheckResult{CheckState::Pass, std::move(expected), std::move(actual), {}};
}

CheckResult fail(std::string expected, std::string actual, std::string note = {}) {
  return CheckResult{CheckState::Fail, std::move(expected), std::move(actual),
                     std::move(note)};
}

}  // namespace

nlohmann::json AuditVerdict::to_json() const {
  nlohmann::json checks_json = nlohmann::json::object();
  for (const auto& [name, check] : checks) {
    nlohmann::json entry;
    entry["state"] = state_name(check.state);
    if (!check.expected.empty()) {
      entry["expected"] = check.expected;
    }
    if (!check.actual.empty()) {
      entry["actual"] = check.actual;
    }
    if (!check.note.empty()) {
      entry["note"] = check.note;
    }
    checks_json[name] = entry;
  }
  nlohmann::json out;
  out["windowId"] = window_id;
  out["status"] = verified ? "Verified" : "Failed";
  out["checks"] = checks_json;
  out["checkpointSource"] = checkpoint_source;
  return out;
}

Auditor::Auditor(LedgerBackend* ledger, const MirrorLog* mirror, AuditorOptions options)
    : ledger_(ledger), mirror_(mirror), options_(std::move(options)) {}

std::optional<Checkpoint> Auditor::find_checkpoint(const std::string& window_id,
                                                   const std::string& stream,
                                                   AuditVerdict& verdict) {
  std::optional<Checkpoint> from_chain;
  std::string chain_note;
  if (ledger_ != nullptr) {
    try {
      for (const auto& item : ledger_->list_items(stream)) {
        if (item.key != window_id) {
          continue;
        }
        from_chain = checkpoint_from_json(item.value);  // last anchored wins
      }
    } catch (const LedgerError& error) {
      chain_note = std::string("ledger lookup failed: ") + error.what();
    } catch (const ParseError& error) {
      chain_note = std::string("on-chain item malformed: ") + error.what();
    }
  }

  std::optional<Checkpoint> from_mirror;
  if (mirror_ != nullptr) {
    if (auto entry = mirror_->find(window_id)) {
      from_mirror = std::move(entry->checkpoint);
    }
  }

  if (from_chain) {
    verdict.checkpoint_source = "chain";
    std::string note;
    if (from_mirror && !(*from_mirror == *from_chain)) {
      note = "mirror log disagrees with chain; chain wins";
    }
    verdict.checks["checkpointFound"] =
        CheckResult{CheckState::Pass, {}, "chain", note};
    return from_chain;
  }
  if (from_mirror) {
    verdict.checkpoint_source = "mirror";
    std::string note = chain_note.empty() ? "not on chain; using mirror log" : chain_note;
    verdict.checks["checkpointFound"] =
        CheckResult{CheckState::Pass, {}, "mirror", note};
    return from_mirror;
  }
  verdict.checks["checkpointFound"] =
      fail("checkpoint for " + window_id, "none", chain_note);
  return std::nullopt;
}

AuditVerdict Auditor::verify_window(const std::string& window_id,
                                    const std::string& stream) {
  AuditVerdict verdict;
  verdict.window_id = window_id;
  std::int64_t start_total = now_nanos();

  auto checkpoint = find_checkpoint(window_id, stream, verdict);
  if (!checkpoint) {
    verdict.verified = false;
    verdict.timing.total_nanos = now_nanos() - start_total;
    return verdict;
  }

  std::filesystem::path payload_path(checkpoint->payload_path);
  if (payload_path.is_relative()) {
    payload_path = options_.resolve_base / payload_path;
  }

  std::string bytes;
  {
    std::ifstream in(payload_path, std::ios::binary);
    if (!in) {
      verdict.checks["payloadReadable"] =
          fail("readable payload", "cannot open " + payload_path.string());
      verdict.verified = false;
      verdict.timing.total_nanos = now_nanos() - start_total;
      return verdict;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    bytes = buffer.str();
  }

  auto file_digest = Digest::of(bytes).hex();
  verdict.checks["payloadHashMatch"] =
      file_digest == checkpoint->payload_sha256
          ? pass(checkpoint->payload_sha256, file_digest)
          : fail(checkpoint->payload_sha256, file_digest);

  // Parse NDJSON lines; any malformed or empty payload fails readability.
  std::vector<nlohmann::json> records;
  bool readable = true;
  std::string readable_note;
  {
    std::istringstream in(bytes);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) {
        continue;
      }
      auto obj = nlohmann::json::parse(line, nullptr, false);
      if (obj.is_discarded() || !obj.is_object()) {
        readable = false;
        readable_note = "line " + std::to_string(line_no) + " is not a JSON object";
        break;
      }
      records.push_back(std::move(obj));
    }
    if (readable && records.empty()) {
      readable = false;
      readable_note = "empty payload";
    }
  }
  if (!readable) {
    verdict.checks["payloadReadable"] = fail("parseable NDJSON records",
                                             readable_note);
    verdict.verified = false;
    verdict.timing.total_nanos = now_nanos() - start_total;
    return verdict;
  }
  verdict.checks["payloadReadable"] =
      pass({}, std::to_string(records.size()) + " records");

  // Canonicalize and count.
  std::vector<std::string> canonical_lines;
  canonical_lines.reserve(records.size());
  std::int64_t canon_start = now_nanos();
  for (const auto& record : records) {
    canonical_lines.push_back(canonical_json(record));
  }
  verdict.timing.canonicalize_nanos = now_nanos() - canon_start;
  std::int64_t recomputed_count = static_cast<std::int64_t>(canonical_lines.size());
  verdict.timing.record_count = recomputed_count;

  // Rebuild the tree.
  std::int64_t merkle_start = now_nanos();
  auto root = merkle_root(canonical_lines);
  verdict.timing.merkle_nanos = now_nanos() - merkle_start;
  std::string recomputed_root = root ? root->hex() : "";

  verdict.checks["countMatch"] =
      recomputed_count == checkpoint->record_count
          ? pass(std::to_string(checkpoint->record_count), std::to_string(recomputed_count))
          : fail(std::to_string(checkpoint->record_count), std::to_string(recomputed_count));
  verdict.checks["rootMatch"] = recomputed_root == checkpoint->merkle_root
                                    ? pass(checkpoint->merkle_root, recomputed_root)
                                    : fail(checkpoint->merkle_root, recomputed_root);

  // Aggregates, when a results file was supplied.
  if (options_.results_path) {
    CheckResult check;
    std::ifstream results(*options_.results_path, std::ios::binary);
    if (!results) {
      check = fail("results file", "cannot open " + options_.results_path->string());
    } else {
      std::optional<nlohmann::json> row;
      std::string line;
      while (std::getline(results, line)) {
        if (line.empty()) {
          continue;
        }
        auto parsed = nlohmann::json::parse(line, nullptr, false);
        if (!parsed.is_discarded() && parsed.is_object() &&
            parsed.value("windowId", std::string{}) == window_id) {
          row = std::move(parsed);  // last row wins
        }
      }
      if (!row) {
        check = fail("results row for " + window_id, "none");
      } else {
        auto recomputed = compute_aggregates(canonical_lines);
        auto render = [](const nlohmann::json& value) -> std::string {
          if (value.is_number()) {
            return canonical_json(value);
          }
          return value.is_string() ? value.get<std::string>() : std::string{};
        };
        std::string expected = "min=" + recomputed.min + " max=" + recomputed.max +
                               " avg=" + recomputed.avg +
                               " count=" + std::to_string(recomputed.count);
        std::string actual = "min=" + render(row->value("min", nlohmann::json())) +
                             " max=" + render(row->value("max", nlohmann::json())) +
                             " avg=" + render(row->value("avg", nlohmann::json())) +
                             " count=" + render(row->value("count", nlohmann::json()));
        check = expected == actual ? pass(expected, actual) : fail(expected, actual);
      }
    }
    verdict.checks["aggregatesMatch"] = check;
  } else {
    verdict.checks["aggregatesMatch"] = CheckResult{CheckState::Skipped, {}, {},
                                                    "no results file supplied"};
  }

  bool core = verdict.checks["countMatch"].state == CheckState::Pass &&
              verdict.checks["rootMatch"].state == CheckState::Pass;
  verdict.verified = core;
  if (options_.strict) {
    for (const auto& [name, check] : verdict.checks) {
      (void)name;
      if (check.state == CheckState::Fail) {
        verdict.verified = false;
      }
    }
  }
  verdict.timing.total_nanos = now_nanos() - start_total;
  return verdict;
}

Auditor::RecordVerdict Auditor::verify_record(const std::string& window_id,
                                              const std::string& stream,
                                              const Record& record,
                                              const CanonicalConfig& canon_config) {
  AuditVerdict scratch;
  auto checkpoint = find_checkpoint(window_id, stream, scratch);
  if (!checkpoint) {
    throw WindowUnavailableError("no checkpoint for window " + window_id);
  }

  std::filesystem::path payload_path(checkpoint->payload_path);
  if (payload_path.is_relative()) {
    payload_path = options_.resolve_base / payload_path;
  }
  std::ifstream in(payload_path, std::ios::binary);
  if (!in) {
    throw WindowUnavailableError("cannot open payload " + payload_path.string());
  }
  std::vector<std::string> canonical_lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    auto obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded()) {
      throw WindowUnavailableError("payload is not parseable NDJSON");
    }
    canonical_lines.push_back(canonical_json(obj));
  }

  auto tree = build_tree(leaf_hashes(canonical_lines));
  auto leaf = leaf_hash(canonicalize(record, canon_config));
  auto proof = merkle_proof(tree, leaf);
  if (!proof) {
    return RecordVerdict{false, "record is not a member of the window payload"};
  }
  auto folded = fold_proof(leaf, *proof);
  if (folded.hex() != checkpoint->merkle_root) {
    return RecordVerdict{false, "proof does not reach the anchored root"};
  }
  return RecordVerdict{true, "membership proof verified against anchored root"};
}

AuditSummary Auditor::verify_all(const std::vector<std::string>& streams) {
  AuditSummary summary;
  for (const auto& stream : streams) {
    std::vector<std::string> window_ids;
    std::set<std::string> seen;
    if (ledger_ != nullptr) {
      try {
        for (const auto& item : ledger_->list_items(stream)) {
          if (seen.insert(item.key).second) {
            window_ids.push_back(item.key);
          }
        }
      } catch (const LedgerError& error) {
        summary.errors.push_back(stream + ": " + error.what());
      }
    }
    if (window_ids.empty() && mirror_ != nullptr) {
      for (const auto& entry : mirror_->read_all()) {
        if (entry.checkpoint.blockchain_stream == stream &&
            seen.insert(entry.checkpoint.window_id).second) {
          window_ids.push_back(entry.checkpoint.window_id);
        }
      }
    }
    for (const auto& id : window_ids) {
      auto verdict = verify_window(id, stream);
      if (verdict.verified) {
        ++summary.verified;
      } else {
        ++summary.failed;
      }
      summary.verdicts.push_back(std::move(verdict));
    }
  }
  return summary;
}

}  // namespace streamseal
