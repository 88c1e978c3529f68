#include <streamseal/ledger_rpc.hpp>

#include <chrono>

#include <httplib.h>
#include <json.hpp>

#include <streamseal/errors.hpp>

namespace streamseal {

namespace {

std::string to_hex_bytes(const std::string& value) {
  static const char* kDigits = "0123456789abcdef";
  std::string out;
  out.reserve(value.size() * 2);
  for (unsigned char c : value) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 0xF]);
  }
  return out;
}

std::string from_hex_bytes(const std::string& hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) {
    throw LedgerError("ledger returned odd-length hex data");
  }
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]);
    int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) {
      throw LedgerError("ledger returned invalid hex data");
    }
    out.push_back(static_cast<char>((hi << 4) | lo));
  }
  return out;
}

bool contains_ci(const std::string& haystack, const std::string& needle) {
  auto lower = [](std::string s) {
    for (auto& c : s) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return s;
  };
  return lower(haystack).find(lower(needle)) != std::string::npos;
}

}  // namespace

struct RpcLedger::Impl {
  RpcLedgerConfig config;
  httplib::Client client;
  int next_id = 1;

  explicit Impl(RpcLedgerConfig cfg)
      : config(std::move(cfg)), client(config.endpoint) {
    client.set_connection_timeout(config.timeout_seconds, 0);
    client.set_read_timeout(config.timeout_seconds, 0);
    if (!config.user.empty()) {
      client.set_basic_auth(config.user, config.password);
    }
  }

  nlohmann::json call(const std::string& method, const nlohmann::json& params) {
    nlohmann::json request;
    request["id"] = next_id++;
    request["method"] = method;
    request["params"] = params;

    auto response = client.Post("/", request.dump(), "application/json");
    if (!response) {
      throw LedgerUnreachableError("no response from ledger endpoint " +
                                   config.endpoint);
    }
    if (response->status == 401 || response->status == 403) {
      throw PermissionDeniedError("ledger rejected credentials (HTTP " +
                                  std::to_string(response->status) + ")");
    }

    auto body = nlohmann::json::parse(response->body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      throw LedgerError("ledger returned malformed JSON-RPC body");
    }
    if (body.contains("error") && !body["error"].is_null()) {
      const auto& error = body["error"];
      std::string message = error.value("message", std::string("unknown error"));
      if (contains_ci(message, "permission")) {
        throw PermissionDeniedError(message);
      }
      if (contains_ci(message, "not found") || contains_ci(message, "unknown") ||
          contains_ci(message, "no such")) {
        throw UnknownStreamError(message);
      }
      throw LedgerError("ledger RPC error: " + message);
    }
    if (!body.contains("result")) {
      throw LedgerError("ledger RPC response has no result");
    }
    return body["result"];
  }
};

RpcLedger::RpcLedger(RpcLedgerConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

RpcLedger::~RpcLedger() = default;

void RpcLedger::ensure_stream(const std::string& name) {
  try {
    impl_->call("create", nlohmann::json::array({"stream", name, true}));
  } catch (const LedgerError& error) {
    if (contains_ci(error.what(), "already exists")) {
      return;  // idempotent
    }
    throw;
  }
}

AnchorReceipt RpcLedger::publish(const std::string& stream, const std::string& key,
                                 const std::string& value) {
  if (static_cast<std::int64_t>(value.size()) > impl_->config.max_item_bytes) {
    throw OversizedItemError("item exceeds max size " +
                             std::to_string(impl_->config.max_item_bytes) + " bytes");
  }
  auto result =
      impl_->call("publish", nlohmann::json::array({stream, key, to_hex_bytes(value)}));
  if (!result.is_string()) {
    throw LedgerError("publish did not return a txid");
  }
  AnchorReceipt receipt;
  receipt.txid = result.get<std::string>();
  receipt.stream_name = stream;
  receipt.key = key;
  receipt.published_at = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::system_clock::now().time_since_epoch())
                             .count();
  return receipt;
}

std::vector<StreamItem> RpcLedger::list_items(const std::string& stream,
                                              std::int64_t from_height) {
  // MultiChain pages by item index: liststreamitems(stream, verbose, count, start).
  auto result = impl_->call(
      "liststreamitems",
      nlohmann::json::array({stream, true, 1000000, from_height}));
  if (!result.is_array()) {
    throw LedgerError("liststreamitems did not return an array");
  }
  std::vector<StreamItem> items;
  for (const auto& row : result) {
    if (!row.is_object()) {
      continue;
    }
    StreamItem item;
    if (row.contains("keys") && row["keys"].is_array() && !row["keys"].empty()) {
      item.key = row["keys"][0].get<std::string>();
    }
    if (!row.contains("data") || !row["data"].is_string()) {
      throw LedgerError("stream item data is not inline hex (off-chain items unsupported)");
    }
    item.value = from_hex_bytes(row["data"].get<std::string>());
    item.txid = row.value("txid", std::string{});
    item.confirmed_at = row.value("blocktime", std::int64_t{0});
    item.block_height = row.value("blockheight", std::int64_t{0});
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace streamseal
