#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace streamseal {

struct AnchorReceipt {
  std::string txid;
  std::string stream_name;
  std::string key;
  std::int64_t published_at = 0;               // epoch seconds
  std::optional<std::int64_t> confirmed_at;    // nullopt while pending
};

struct StreamItem {
  std::string key;
  std::string value;  // raw bytes as published
  std::string txid;
  std::int64_t confirmed_at = 0;
  std::int64_t block_height = 0;
};

// Append-only key-value stream ledger. Implementations: embedded simulator
// and a remote JSON-RPC client.
class LedgerBackend {
 public:
  virtual ~LedgerBackend() = default;

  // Creates the stream if needed; idempotent.
  virtual void ensure_stream(const std::string& name) = 0;

  // Appends an item; returns a receipt with a unique txid. Safe to call
  // from concurrent workers.
  virtual AnchorReceipt publish(const std::string& stream, const std::string& key,
                                const std::string& value) = 0;

  // Confirmed items in (blockHeight, intra-block index) order, filtered to
  // blockHeight >= from_height. Remote backends treat from_height as the
  // starting item index, their native pagination unit.
  virtual std::vector<StreamItem> list_items(const std::string& stream,
                                             std::int64_t from_height = 0) = 0;

  // Drains any backend-internal confirmation queue (no-op for backends
  // whose confirmations happen externally).
  virtual void finalize() {}
};

}  // namespace streamseal
