#include <streamseal/pipeline.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>

#include <streamseal/aggregates.hpp>
#include <streamseal/canonical.hpp>
#include <streamseal/errors.hpp>
#include <streamseal/generator.hpp>
#include <streamseal/json_canon.hpp>

namespace streamseal {

namespace {

void append_line(const std::filesystem::path& path, const std::string& line) {
  if (!path.parent_path().empty()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) {
    throw IoError("cannot append to " + path.string());
  }
  out << line << '\n';
  if (!out.flush()) {
    throw IoError("append failed for " + path.string());
  }
}

}  // namespace

std::vector<Record> read_source(const SourceSpec& source, const ToolConfig& config) {
  std::vector<Record> records;
  if (source.file) {
    auto path = config.resolve(*source.file);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw IoError("cannot read source file " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) {
        continue;
      }
      auto obj = nlohmann::json::parse(line, nullptr, false);
      if (obj.is_discarded()) {
        throw ParseError(line_no, "invalid JSON in " + path.string());
      }
      Record record;
      try {
        record = record_from_json(obj);
      } catch (const Error& error) {
        throw ParseError(line_no, std::string(error.what()) + " in " + path.string());
      }
      if (record.source_stream != source.name) {
        throw ParseError(line_no, "record sourceStream \"" + record.source_stream +
                                      "\" does not match configured source \"" +
                                      source.name + "\"");
      }
      records.push_back(std::move(record));
    }
  } else {
    records = generate_records(source.name, "GEN", *source.generator);
  }

  std::int64_t offset = 0;
  for (auto& record : records) {
    record.ingest_meta["offset"] = offset++;
  }
  return records;
}

std::vector<Record> merge_sources(const std::vector<std::vector<Record>>& streams,
                                  MergeOrder order) {
  std::vector<Record> merged;
  std::size_t total = 0;
  for (const auto& stream : streams) {
    total += stream.size();
  }
  merged.reserve(total);

  if (order == MergeOrder::Sequential) {
    for (const auto& stream : streams) {
      merged.insert(merged.end(), stream.begin(), stream.end());
    }
    return merged;
  }

  std::vector<std::size_t> cursors(streams.size(), 0);
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (std::size_t s = 0; s < streams.size(); ++s) {
      if (cursors[s] < streams[s].size()) {
        merged.push_back(streams[s][cursors[s]++]);
        progressed = true;
      }
    }
  }
  return merged;
}

Pipeline::Pipeline(const ToolConfig& config, LedgerBackend& ledger)
    : config_(config), ledger_(ledger), mirror_(config.mirror_log_path()) {
  for (const auto& source : config_.sources) {
    scope_order_.push_back(source.name);
    scope_streams_[source.name] = source.stream;
    watermarks_[source.name] = std::numeric_limits<std::int64_t>::min();
  }
  if (config_.region) {
    scope_order_.push_back(config_.region->name);
    scope_streams_[config_.region->name] = config_.region->stream;
  }
}

std::int64_t Pipeline::scope_watermark(const std::string& scope_name) const {
  if (config_.region && scope_name == config_.region->name) {
    std::int64_t low = std::numeric_limits<std::int64_t>::max();
    for (const auto& [name, watermark] : watermarks_) {
      (void)name;
      low = std::min(low, watermark);
    }
    return watermarks_.empty() ? std::numeric_limits<std::int64_t>::min() : low;
  }
  auto it = watermarks_.find(scope_name);
  return it == watermarks_.end() ? std::numeric_limits<std::int64_t>::min()
                                 : it->second;
}

void Pipeline::buffer(const std::string& scope_name, const Record& record) {
  WindowKey key = assign_window(scope_name, record.event_time, config_.window);
  auto& window = open_[scope_name][key.start_time];
  if (window.buffered.empty()) {
    window.key = key;
  }
  window.buffered.push_back(record);
}

void Pipeline::process(const Record& record) {
  auto watermark_it = watermarks_.find(record.source_stream);
  if (watermark_it == watermarks_.end()) {
    throw ParseError("record from unconfigured source: " + record.source_stream);
  }
  ++stats_.records_ingested;
  watermark_it->second = std::max(watermark_it->second, record.event_time);

  WindowKey key = assign_window(record.source_stream, record.event_time, config_.window);
  if (key.end_time + config_.window.grace_seconds <= watermark_it->second &&
      open_[record.source_stream].count(key.start_time) == 0) {
    ++stats_.records_dropped_late;
    std::cerr << "late record dropped: source=" << record.source_stream
              << " t=" << record.event_time << "\n";
    return;
  }

  buffer(record.source_stream, record);
  if (config_.region) {
    buffer(config_.region->name, record);
  }
  close_due_windows();
}

void Pipeline::close_due_windows() {
  for (const auto& scope : scope_order_) {
    std::int64_t watermark = scope_watermark(scope);
    auto& windows = open_[scope];
    while (!windows.empty()) {
      auto first = windows.begin();
      if (first->second.key.end_time + config_.window.grace_seconds > watermark) {
        break;  // start-ordered map: later windows end later
      }
      OpenWindow window = std::move(first->second);
      windows.erase(first);
      seal_window(scope_streams_.at(scope), std::move(window));
    }
  }
}

void Pipeline::flush_all() {
  for (const auto& scope : scope_order_) {
    auto& windows = open_[scope];
    while (!windows.empty()) {
      auto first = windows.begin();
      OpenWindow window = std::move(first->second);
      windows.erase(first);
      seal_window(scope_streams_.at(scope), std::move(window));
    }
  }
}

void Pipeline::seal_window(const std::string& stream_name, OpenWindow window) {
  if (window.buffered.empty()) {
    return;
  }

  std::int64_t offset_min = std::numeric_limits<std::int64_t>::max();
  std::int64_t offset_max = std::numeric_limits<std::int64_t>::min();
  for (const auto& record : window.buffered) {
    std::int64_t offset = record_offset(record);
    offset_min = std::min(offset_min, offset);
    offset_max = std::max(offset_max, offset);
  }

  CanonicalConfig canon_config{config_.exclude_fields};
  auto canon_all = canonicalize_batch(window.buffered, canon_config, ExecMode::Parallel);
  auto canon = dedupe(std::move(canon_all));
  stats_.duplicates_removed +=
      static_cast<std::int64_t>(window.buffered.size() - canon.size());

  auto payload_file = write_payload(window.key, canon, config_.payload_dir());
  std::string payload_path_text =
      config_.payload_base_dir + "/" + payload_filename(window.key);
  auto checkpoint =
      build_checkpoint(window.key, canon, offset_min, offset_max, payload_file,
                       payload_path_text, stream_name, config_.empty_window_policy);
  if (!checkpoint) {
    return;
  }
  ++stats_.windows_sealed;

  std::vector<std::string> lines;
  lines.reserve(canon.size());
  for (const auto& entry : canon) {
    lines.push_back(entry.bytes);
  }
  auto aggregates = compute_aggregates(lines);
  append_line(config_.results_path(),
              aggregate_row(window.key.source_stream, checkpoint->window_id, aggregates));

  try {
    if (!ensured_[stream_name]) {
      ledger_.ensure_stream(stream_name);
      ensured_[stream_name] = true;
    }
    auto receipt = ledger_.publish(stream_name, checkpoint->window_id,
                                   checkpoint_to_json(*checkpoint));
    mirror_.append(*checkpoint, receipt.txid, receipt.published_at);
  } catch (const LedgerError& error) {
    std::cerr << "anchor failed, parking checkpoint " << checkpoint->window_id << ": "
              << error.what() << "\n";
    park(*checkpoint, stream_name);
  }
}

void Pipeline::park(const Checkpoint& checkpoint, const std::string& stream_name) {
  nlohmann::json row;
  row["checkpoint"] = nlohmann::json::parse(checkpoint_to_json(checkpoint));
  row["stream"] = stream_name;
  append_line(config_.parked_path(), canonical_json(row));
  ++stats_.checkpoints_parked;
}

void Pipeline::retry_parked() {
  auto path = config_.parked_path();
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return;
  }
  struct Parked {
    Checkpoint checkpoint;
    std::string stream;
  };
  std::vector<Parked> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    auto row = nlohmann::json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object() || !row.contains("checkpoint") ||
        !row.contains("stream")) {
      throw ParseError(line_no, "malformed parked checkpoint line");
    }
    entries.push_back(
        Parked{checkpoint_from_json(row["checkpoint"]), row["stream"].get<std::string>()});
  }
  in.close();

  std::vector<Parked> still_parked;
  for (auto& entry : entries) {
    try {
      ledger_.ensure_stream(entry.stream);
      auto receipt = ledger_.publish(entry.stream, entry.checkpoint.window_id,
                                     checkpoint_to_json(entry.checkpoint));
      mirror_.append(entry.checkpoint, receipt.txid, receipt.published_at);
      ensured_[entry.stream] = true;
      ++stats_.checkpoints_retried;
    } catch (const LedgerError&) {
      still_parked.push_back(std::move(entry));
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot rewrite " + path.string());
  }
  for (const auto& entry : still_parked) {
    nlohmann::json row;
    row["checkpoint"] = nlohmann::json::parse(checkpoint_to_json(entry.checkpoint));
    row["stream"] = entry.stream;
    out << canonical_json(row) << '\n';
  }
  out.flush();
  if (still_parked.empty()) {
    out.close();
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
}

PipelineStats Pipeline::run(bool flush_at_eof, MergeOrder order) {
  retry_parked();

  std::vector<std::vector<Record>> streams;
  streams.reserve(config_.sources.size());
  for (const auto& source : config_.sources) {
    streams.push_back(read_source(source, config_));
  }
  auto merged = merge_sources(streams, order);
  for (const auto& record : merged) {
    process(record);
  }
  if (flush_at_eof) {
    flush_all();
  }
  ledger_.finalize();
  return stats_;
}

}  // namespace streamseal
