#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <streamseal/checkpoint.hpp>
#include <streamseal/config.hpp>
#include <streamseal/ledger.hpp>
#include <streamseal/record.hpp>

namespace streamseal {

// How the per-source streams are interleaved. Window contents, checkpoints,
// and aggregates are identical under every order; only log line order and
// txids may differ.
enum class MergeOrder { RoundRobin, Sequential };

struct PipelineStats {
  std::int64_t records_ingested = 0;
  std::int64_t windows_sealed = 0;
  std::int64_t records_dropped_late = 0;
  std::int64_t duplicates_removed = 0;
  std::int64_t checkpoints_parked = 0;
  std::int64_t checkpoints_retried = 0;
};

// Reads one source's records (file or generator) and stamps per-source
// ingest offsets 0.. in input order.
std::vector<Record> read_source(const SourceSpec& source, const ToolConfig& config);

// Interleaves the per-source record vectors.
std::vector<Record> merge_sources(const std::vector<std::vector<Record>>& streams,
                                  MergeOrder order);

// End-to-end driver: ingest, window, seal, anchor, aggregate. One window
// state owner per scope (each source, plus the merged region when
// configured); a record buffers into its source scope and the region scope.
class Pipeline {
 public:
  Pipeline(const ToolConfig& config, LedgerBackend& ledger);

  // Feeds one offset-stamped record through windowing, then seals every
  // window whose close condition is now met. A record whose window already
  // closed (watermark beyond end + grace) is dropped as late.
  void process(const Record& record);

  // Seals all windows that are still open (end-of-input flush).
  void flush_all();

  // Re-publishes parked checkpoints; successful ones leave the park file.
  void retry_parked();

  // Full run: retry parked work, read sources, stream everything through
  // process(), optionally flush, then drain the ledger's pending queue.
  PipelineStats run(bool flush_at_eof, MergeOrder order = MergeOrder::RoundRobin);

  const PipelineStats& stats() const { return stats_; }

 private:
  struct OpenWindow {
    WindowKey key;
    std::vector<Record> buffered;
  };

  void buffer(const std::string& scope_name, const Record& record);
  void close_due_windows();
  void seal_window(const std::string& stream_name, OpenWindow window);
  std::int64_t scope_watermark(const std::string& scope_name) const;
  void park(const Checkpoint& checkpoint, const std::string& stream_name);

  const ToolConfig& config_;
  LedgerBackend& ledger_;
  MirrorLog mirror_;
  PipelineStats stats_;
  std::vector<std::string> scope_order_;  // sources in config order, then region
  std::map<std::string, std::string> scope_streams_;
  // scope name -> open windows keyed by start time
  std::map<std::string, std::map<std::int64_t, OpenWindow>> open_;
  // source name -> highest event time seen
  std::map<std::string, std::int64_t> watermarks_;
  std::map<std::string, bool> ensured_;
};

}  // namespace streamseal
