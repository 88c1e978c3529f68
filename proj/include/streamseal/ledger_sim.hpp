#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include <streamseal/ledger.hpp>

namespace streamseal {

struct SimLedgerConfig {
  // Empty path keeps the chain in memory only.
  std::filesystem::path journal_path;
  std::int64_t block_interval_seconds = 15;
  // Transactions per block; 0 means unbounded.
  std::int64_t block_capacity = 0;
  std::vector<std::string> miners = {"sim-miner-1"};
  // Wall-clock delay charged per publish call, outside the state lock.
  std::int64_t publish_latency_micros = 0;
  // Simulated validation cost added to each block's mint time.
  std::int64_t validation_nanos_per_byte = 0;
  std::int64_t max_item_bytes = 2 * 1024 * 1024;
  std::set<std::string> deny_streams;
  // Epoch-seconds clock for publishedAt stamps. Defaults to the chain's own
  // logical time, which keeps journals reproducible.
  std::function<std::int64_t()> clock;
};

struct Confirmation {
  std::string txid;
  std::string stream;
  std::string key;
  std::int64_t block_height = 0;
  std::int64_t confirmed_at = 0;
  std::string miner;
};

// Embedded chain: FIFO pending queue, blocks minted at fixed simulated
// intervals by round-robin miners. State persists as an NDJSON journal so
// separate processes (pipeline, auditor, CLI) see the same chain.
class SimLedger : public LedgerBackend {
 public:
  explicit SimLedger(SimLedgerConfig config);

  void ensure_stream(const std::string& name) override;
  AnchorReceipt publish(const std::string& stream, const std::string& key,
                        const std::string& value) override;
  std::vector<StreamItem> list_items(const std::string& stream,
                                     std::int64_t from_height = 0) override;
  void finalize() override;

  // Mints every block due at or before `now_seconds` of simulated time.
  std::vector<Confirmation> tick(std::int64_t now_seconds);

  // Fault injection: when set, every call fails with LedgerUnreachableError.
  void set_unreachable(bool value);

  std::int64_t now_seconds() const;
  std::size_t pending_count() const;
  std::int64_t block_height() const;
  std::vector<std::string> stream_names() const;

 private:
  struct PendingTx {
    std::string txid;
    std::string stream;
    std::string key;
    std::string value;
    std::int64_t published_at = 0;
  };

  void check_reachable() const;
  void journal_append(const std::string& line);
  void replay_journal();
  std::vector<Confirmation> mint_blocks_locked(std::int64_t now_nanos, bool drain);
  std::int64_t clock_locked() const;

  SimLedgerConfig config_;
  mutable std::mutex mutex_;
  bool unreachable_ = false;
  std::set<std::string> streams_;
  std::deque<PendingTx> pending_;
  std::map<std::string, std::vector<StreamItem>> confirmed_;
  std::uint64_t publish_seq_ = 0;
  std::int64_t height_ = 0;
  std::int64_t last_mint_nanos_ = 0;
  std::int64_t max_published_at_ = 0;
};

}  // namespace streamseal
