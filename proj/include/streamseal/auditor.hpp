#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <streamseal/canonical.hpp>
#include <streamseal/checkpoint.hpp>
#include <streamseal/ledger.hpp>
#include <streamseal/record.hpp>

namespace streamseal {

enum class CheckState { Pass, Fail, Skipped };

struct CheckResult {
  CheckState state = CheckState::Skipped;
  std::string expected;
  std::string actual;
  std::string note;
};

struct VerifyTiming {
  std::int64_t record_count = 0;
  std::int64_t canonicalize_nanos = 0;
  std::int64_t merkle_nanos = 0;
  std::int64_t total_nanos = 0;
};

// Check names: checkpointFound, payloadReadable, payloadHashMatch,
// countMatch, rootMatch, aggregatesMatch. Verified means both countMatch
// and rootMatch passed and no earlier mandatory check failed; under strict
// mode any failing check fails the window.
struct AuditVerdict {
  std::string window_id;
  bool verified = false;
  std::map<std::string, CheckResult> checks;
  std::string checkpoint_source;  // "chain", "mirror", or ""
  VerifyTiming timing;

  nlohmann::json to_json() const;
};

struct AuditorOptions {
  bool strict = false;
  // When set, aggregate rows are looked up here and recomputed.
  std::optional<std::filesystem::path> results_path;
  // Base for resolving relative payload paths (the config directory).
  std::filesystem::path resolve_base = ".";
};

struct AuditSummary {
  std::vector<AuditVerdict> verdicts;
  std::int64_t verified = 0;
  std::int64_t failed = 0;
  std::vector<std::string> errors;  // per-stream annotations
};

// Independent verifier: consults only the ledger, the mirror log, and the
// payload files. Never touches pipeline state.
class Auditor {
 public:
  Auditor(LedgerBackend* ledger, const MirrorLog* mirror, AuditorOptions options);

  AuditVerdict verify_window(const std::string& window_id, const std::string& stream);

  struct RecordVerdict {
    bool pass = false;
    std::string note;
  };

  // Membership of one raw record in a sealed window, by Merkle proof
  // against the checkpoint root.
  RecordVerdict verify_record(const std::string& window_id, const std::string& stream,
                              const Record& record, const CanonicalConfig& canon_config);

  // Verifies every distinct windowId anchored on the given streams.
  AuditSummary verify_all(const std::vector<std::string>& streams);

 private:
  std::optional<Checkpoint> find_checkpoint(const std::string& window_id,
                                            const std::string& stream,
                                            AuditVerdict& verdict);

  LedgerBackend* ledger_;
  const MirrorLog* mirror_;
  AuditorOptions options_;
};

}  // namespace streamseal
