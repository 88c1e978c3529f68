#include <streamseal/ledger_sim.hpp>

#include <chrono>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include <streamseal/digest.hpp>
#include <streamseal/errors.hpp>
#include <streamseal/json_canon.hpp>

namespace streamseal {

namespace {

constexpr std::int64_t kNanosPerSecond = 1'000'000'000;

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
    throw ParseError("odd-length hex value");
  }
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]);
    int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) {
      throw ParseError("invalid hex value");
    }
    out.push_back(static_cast<char>((hi << 4) | lo));
  }
  return out;
}

}  // namespace

SimLedger::SimLedger(SimLedgerConfig config) : config_(std::move(config)) {
  if (config_.miners.empty()) {
    config_.miners = {"sim-miner-1"};
  }
  replay_journal();
}

void SimLedger::check_reachable() const {
  if (unreachable_) {
    throw LedgerUnreachableError("simulated ledger is unreachable");
  }
}

std::int64_t SimLedger::clock_locked() const {
  if (config_.clock) {
    return config_.clock();
  }
  std::int64_t chain_now = last_mint_nanos_ / kNanosPerSecond;
  return std::max(chain_now, max_published_at_);
}

void SimLedger::journal_append(const std::string& line) {
  if (config_.journal_path.empty()) {
    return;
  }
  if (!config_.journal_path.parent_path().empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config_.journal_path.parent_path(), ec);
  }
  std::ofstream out(config_.journal_path, std::ios::binary | std::ios::app);
  if (!out) {
    throw IoError("cannot append to ledger journal " + config_.journal_path.string());
  }
  out << line << '\n';
  if (!out.flush()) {
    throw IoError("journal append failed for " + config_.journal_path.string());
  }
}

void SimLedger::replay_journal() {
  if (config_.journal_path.empty()) {
    return;
  }
  std::ifstream in(config_.journal_path, std::ios::binary);
  if (!in) {
    return;  // fresh chain
  }
  std::map<std::string, PendingTx> known;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    auto row = nlohmann::json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object()) {
      throw ParseError(line_no, "malformed ledger journal line");
    }
    std::string type = row.value("type", std::string{});
    if (type == "stream") {
      streams_.insert(row.at("name").get<std::string>());
    } else if (type == "publish") {
      PendingTx tx;
      tx.txid = row.at("txid").get<std::string>();
      tx.stream = row.at("stream").get<std::string>();
      tx.key = row.at("key").get<std::string>();
      tx.value = from_hex_bytes(row.at("valueHex").get<std::string>());
      tx.published_at = row.at("publishedAt").get<std::int64_t>();
      max_published_at_ = std::max(max_published_at_, tx.published_at);
      pending_.push_back(tx);
      known[tx.txid] = std::move(tx);
      ++publish_seq_;
    } else if (type == "block") {
      std::int64_t height = row.at("height").get<std::int64_t>();
      std::int64_t mined_at = row.at("minedAtNanos").get<std::int64_t>();
      height_ = std::max(height_, height);
      last_mint_nanos_ = std::max(last_mint_nanos_, mined_at);
      for (const auto& txid_json : row.at("txids")) {
        auto txid = txid_json.get<std::string>();
        auto it = known.find(txid);
        if (it == known.end()) {
          throw ParseError(line_no, "journal block references unknown txid");
        }
        StreamItem item;
        item.key = it->second.key;
        item.value = it->second.value;
        item.txid = txid;
        item.confirmed_at = mined_at / kNanosPerSecond;
        item.block_height = height;
        confirmed_[it->second.stream].push_back(std::move(item));
        for (auto pit = pending_.begin(); pit != pending_.end(); ++pit) {
          if (pit->txid == txid) {
            pending_.erase(pit);
            break;
          }
        }
      }
    } else {
      throw ParseError(line_no, "unknown ledger journal row type");
    }
  }
}

void SimLedger::ensure_stream(const std::string& name) {
  std::lock_guard<std::mutex> lock(mutex_);
  check_reachable();
  if (config_.deny_streams.count(name) != 0) {
    throw PermissionDeniedError("stream is denied by ledger policy: " + name);
  }
  if (streams_.insert(name).second) {
    nlohmann::json row;
    row["name"] = name;
    row["type"] = "stream";
    journal_append(canonical_json(row));
  }
}

AnchorReceipt SimLedger::publish(const std::string& stream, const std::string& key,
                                 const std::string& value) {
  AnchorReceipt receipt;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    check_reachable();
    if (config_.deny_streams.count(stream) != 0) {
      throw PermissionDeniedError("stream is denied by ledger policy: " + stream);
    }
    if (streams_.count(stream) == 0) {
      throw UnknownStreamError("stream does not exist: " + stream);
    }
    if (static_cast<std::int64_t>(value.size()) > config_.max_item_bytes) {
      throw OversizedItemError("item exceeds max size " +
                               std::to_string(config_.max_item_bytes) + " bytes");
    }

    PendingTx tx;
    tx.stream = stream;
    tx.key = key;
    tx.value = value;
    tx.published_at = clock_locked();
    max_published_at_ = std::max(max_published_at_, tx.published_at);
    tx.txid = Digest::of("tx|" + std::to_string(publish_seq_) + "|" + stream + "|" +
                         key + "|" + value)
                  .hex();
    ++publish_seq_;

    nlohmann::json row;
    row["key"] = key;
    row["publishedAt"] = tx.published_at;
    row["stream"] = stream;
    row["txid"] = tx.txid;
    row["type"] = "publish";
    row["valueHex"] = to_hex_bytes(value);
    journal_append(canonical_json(row));

    receipt.txid = tx.txid;
    receipt.stream_name = stream;
    receipt.key = key;
    receipt.published_at = tx.published_at;
    pending_.push_back(std::move(tx));
  }
  if (config_.publish_latency_micros > 0) {
    std::this_thread::sleep_for(std::chrono::microseconds(config_.publish_latency_micros));
  }
  return receipt;
}

std::vector<StreamItem> SimLedger::list_items(const std::string& stream,
                                              std::int64_t from_height) {
  std::lock_guard<std::mutex> lock(mutex_);
  check_reachable();
  if (streams_.count(stream) == 0) {
    throw UnknownStreamError("stream does not exist: " + stream);
  }
  std::vector<StreamItem> out;
  auto it = confirmed_.find(stream);
  if (it == confirmed_.end()) {
    return out;
  }
  for (const auto& item : it->second) {
    if (item.block_height >= from_height) {
      out.push_back(item);
    }
  }
  return out;
}

std::vector<Confirmation> SimLedger::mint_blocks_locked(std::int64_t now_nanos,
                                                        bool drain) {
  std::vector<Confirmation> confirmations;
  std::int64_t interval_nanos = config_.block_interval_seconds * kNanosPerSecond;
  while (!pending_.empty()) {
    std::size_t take = pending_.size();
    if (config_.block_capacity > 0) {
      take = std::min<std::size_t>(take, static_cast<std::size_t>(config_.block_capacity));
    }
    std::int64_t validation_nanos = 0;
    for (std::size_t i = 0; i < take; ++i) {
      validation_nanos += static_cast<std::int64_t>(pending_[i].value.size()) *
                          config_.validation_nanos_per_byte;
    }
    std::int64_t mint_at = last_mint_nanos_ + interval_nanos + validation_nanos;
    if (!drain && mint_at > now_nanos) {
      break;
    }

    ++height_;
    last_mint_nanos_ = mint_at;
    const std::string& miner =
        config_.miners[static_cast<std::size_t>(height_ - 1) % config_.miners.size()];
    nlohmann::json txids = nlohmann::json::array();
    for (std::size_t i = 0; i < take; ++i) {
      PendingTx& tx = pending_.front();
      StreamItem item;
      item.key = tx.key;
      item.value = tx.value;
      item.txid = tx.txid;
      item.confirmed_at = mint_at / kNanosPerSecond;
      item.block_height = height_;
      confirmed_[tx.stream].push_back(item);

      Confirmation conf;
      conf.txid = tx.txid;
      conf.stream = tx.stream;
      conf.key = tx.key;
      conf.block_height = height_;
      conf.confirmed_at = item.confirmed_at;
      conf.miner = miner;
      confirmations.push_back(std::move(conf));

      txids.push_back(tx.txid);
      pending_.pop_front();
    }

    nlohmann::json row;
    row["height"] = height_;
    row["minedAtNanos"] = mint_at;
    row["miner"] = miner;
    row["txids"] = txids;
    row["type"] = "block";
    journal_append(canonical_json(row));
  }
  return confirmations;
}

std::vector<Confirmation> SimLedger::tick(std::int64_t now_seconds) {
  std::lock_guard<std::mutex> lock(mutex_);
  check_reachable();
  return mint_blocks_locked(now_seconds * kNanosPerSecond, /*drain=*/false);
}

void SimLedger::finalize() {
  std::lock_guard<std::mutex> lock(mutex_);
  check_reachable();
  mint_blocks_locked(std::numeric_limits<std::int64_t>::max(), /*drain=*/true);
}

void SimLedger::set_unreachable(bool value) {
  std::lock_guard<std::mutex> lock(mutex_);
  unreachable_ = value;
}

std::int64_t SimLedger::now_seconds() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return clock_locked();
}

std::size_t SimLedger::pending_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return pending_.size();
}

std::int64_t SimLedger::block_height() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return height_;
}

std::vector<std::string> SimLedger::stream_names() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return {streams_.begin(), streams_.end()};
}

}  // namespace streamseal
