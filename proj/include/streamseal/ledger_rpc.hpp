#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <streamseal/ledger.hpp>

namespace streamseal {

struct RpcLedgerConfig {
  std::string endpoint;  // e.g. "http://127.0.0.1:7204"
  std::string user;
  std::string password;
  std::int64_t max_item_bytes = 2 * 1024 * 1024;
  std::int64_t timeout_seconds = 10;
};

// JSON-RPC 1.0 client speaking the MultiChain stream commands
// (create/publish/liststreamitems). Values travel hex-encoded in the
// RPC data field; list_items returns the decoded bytes.
class RpcLedger : public LedgerBackend {
 public:
  explicit RpcLedger(RpcLedgerConfig config);
  ~RpcLedger() override;

  void ensure_stream(const std::string& name) override;
  AnchorReceipt publish(const std::string& stream, const std::string& key,
                        const std::string& value) override;
  std::vector<StreamItem> list_items(const std::string& stream,
                                     std::int64_t from_height = 0) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace streamseal
