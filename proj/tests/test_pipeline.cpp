#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>
#include <streamseal/checkpoint.hpp>
#include <streamseal/config.hpp>
#include <streamseal/errors.hpp>
#include <streamseal/ledger_sim.hpp>
#include <streamseal/merkle.hpp>
#include <streamseal/pipeline.hpp>

using namespace streamseal;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// 2025-12-02, two stations. Brandenburg offsets 0..5, Tempelhof 0..2.
const char* kBrandenburgLines[] = {
    R"({"sourceStream":"Berlin Brandenburg","timestamp":"2025-12-02T17:10:00Z","temperature":18.1})",
    R"({"sourceStream":"Berlin Brandenburg","timestamp":"2025-12-02T17:50:00Z","temperature":18.5})",
    R"({"sourceStream":"Berlin Brandenburg","timestamp":"2025-12-02T18:10:00Z","temperature":19.8})",
    R"({"sourceStream":"Berlin Brandenburg","timestamp":"2025-12-02T18:40:00Z","temperature":22.4})",
    R"({"sourceStream":"Berlin Brandenburg","timestamp":"2025-12-02T19:20:00Z","temperature":20.8})",
    R"({"sourceStream":"Berlin Brandenburg","timestamp":"2025-12-02T20:05:00Z","temperature":17})",
};
const char* kTempelhofLines[] = {
    R"({"sourceStream":"Berlin Tempelhof","timestamp":"2025-12-02T17:30:00Z","temperature":16})",
    R"({"sourceStream":"Berlin Tempelhof","timestamp":"2025-12-02T18:30:00Z","temperature":21.5})",
    R"({"sourceStream":"Berlin Tempelhof","timestamp":"2025-12-02T20:10:00Z","temperature":15.5})",
};

const char* kWindow18Id =
    "Berlin Brandenburg:2025-12-02T18:00:00Z_2025-12-02T20:00:00Z";
const char* kRegion18Id = "Berlin:2025-12-02T18:00:00Z_2025-12-02T20:00:00Z";

fs::path make_corpus(const char* tag, bool with_region = true) {
  auto dir = fs::temp_directory_path() / (std::string("streamseal_pipe_") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);

  std::ofstream bb(dir / "Brandenburg.ndjson");
  for (const char* line : kBrandenburgLines) {
    bb << line << "\n";
  }
  std::ofstream th(dir / "Tempelhof.ndjson");
  for (const char* line : kTempelhofLines) {
    th << line << "\n";
  }

  json config = json::parse(R"({
    "window": {"durationSeconds": 7200, "graceSeconds": 0},
    "sources": [
      {"name": "Berlin Brandenburg", "stream": "BrandenburgCheck",
       "file": "Brandenburg.ndjson"},
      {"name": "Berlin Tempelhof", "stream": "TempelhofCheck",
       "file": "Tempelhof.ndjson"}
    ],
    "region": {"name": "Berlin", "stream": "BerlinCheck"},
    "ledger": {"backend": "sim", "endpoint": "Files/ledger.ndjson"},
    "payload": {"baseDir": "Files/payloads"},
    "canonical": {"excludeFields": []},
    "emptyWindowPolicy": "skip"
  })");
  if (!with_region) {
    config.erase("region");
  }
  std::ofstream(dir / "config.json") << config.dump(2);
  return dir;
}

std::map<std::string, Checkpoint> checkpoints_by_window(const ToolConfig& config) {
  MirrorLog mirror(config.mirror_log_path());
  std::map<std::string, Checkpoint> out;
  for (const auto& entry : mirror.read_all()) {
    out[entry.checkpoint.window_id] = entry.checkpoint;
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::vector<json> read_ndjson(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::vector<json> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      rows.push_back(json::parse(line));
    }
  }
  return rows;
}

}  // namespace

TEST_CASE("read_source stamps offsets and validates names") {
  auto dir = make_corpus("read");
  auto config = load_config(dir / "config.json");
  auto records = read_source(config.sources[0], config);
  REQUIRE(records.size() == 6);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(record_offset(records[i]) == static_cast<std::int64_t>(i));
  }

  std::ofstream(dir / "Brandenburg.ndjson")
      << R"({"sourceStream":"Somewhere Else","timestamp":0,"temperature":1})" << "\n";
  CHECK_THROWS_AS(read_source(config.sources[0], config), ParseError);

  std::ofstream(dir / "Brandenburg.ndjson") << "{broken\n";
  CHECK_THROWS_AS(read_source(config.sources[0], config), ParseError);
  fs::remove_all(dir);
}

TEST_CASE("merge orders") {
  std::vector<std::vector<Record>> streams(2);
  for (int i = 0; i < 3; ++i) {
    Record r;
    r.source_stream = "A";
    r.event_time = i;
    streams[0].push_back(r);
  }
  Record b;
  b.source_stream = "B";
  b.event_time = 100;
  streams[1].push_back(b);

  auto rr = merge_sources(streams, MergeOrder::RoundRobin);
  REQUIRE(rr.size() == 4);
  CHECK(rr[0].source_stream == "A");
  CHECK(rr[1].source_stream == "B");
  CHECK(rr[2].source_stream == "A");
  CHECK(rr[3].source_stream == "A");

  auto seq = merge_sources(streams, MergeOrder::Sequential);
  CHECK(seq[0].source_stream == "A");
  CHECK(seq[2].source_stream == "A");
  CHECK(seq[3].source_stream == "B");
}

TEST_CASE("full run seals the fixture corpus") {
  auto dir = make_corpus("full");
  auto config = load_config(dir / "config.json");
  SimLedger ledger(SimLedgerConfig{});
  Pipeline pipeline(config, ledger);
  auto stats = pipeline.run(true);

  CHECK(stats.records_ingested == 9);
  CHECK(stats.windows_sealed == 9);  // 3 per source, 3 region
  CHECK(stats.records_dropped_late == 0);
  CHECK(stats.duplicates_removed == 0);
  CHECK(stats.checkpoints_parked == 0);

  auto checkpoints = checkpoints_by_window(config);
  REQUIRE(checkpoints.size() == 9);

  // Hand-checked window: Brandenburg 18:00-20:00 holds offsets 2..4.
  REQUIRE(checkpoints.count(kWindow18Id) == 1);
  const auto& cp = checkpoints[kWindow18Id];
  CHECK(cp.blockchain_stream == "BrandenburgCheck");
  CHECK(cp.source_stream == "Berlin Brandenburg");
  CHECK(cp.record_count == 3);
  CHECK(cp.offset_start == 2);
  CHECK(cp.offset_end == 4);
  CHECK(cp.window_start == "2025-12-02T18:00:00Z");
  CHECK(cp.window_end == "2025-12-02T20:00:00Z");
  CHECK(cp.payload_path ==
        "Files/payloads/Berlin Brandenburg_2025-12-02T18_00_00Z_2025-12-02T20_00_00Z.json");

  // Payload is the byte-sorted canonical lines, one per record.
  std::vector<std::string> lines = {
      R"({"sourceStream":"Berlin Brandenburg","temperature":19.8,"timestamp":"2025-12-02T18:10:00Z"})",
      R"({"sourceStream":"Berlin Brandenburg","temperature":20.8,"timestamp":"2025-12-02T19:20:00Z"})",
      R"({"sourceStream":"Berlin Brandenburg","temperature":22.4,"timestamp":"2025-12-02T18:40:00Z"})",
  };
  auto payload = read_file(config.resolve(cp.payload_path));
  CHECK(payload == lines[0] + "\n" + lines[1] + "\n" + lines[2] + "\n");
  CHECK(cp.payload_sha256 == Digest::of(payload).hex());
  CHECK(cp.merkle_root == merkle_root(lines)->hex());

  // Region window merges both stations; offsets span the per-source counters.
  REQUIRE(checkpoints.count(kRegion18Id) == 1);
  const auto& region = checkpoints[kRegion18Id];
  CHECK(region.blockchain_stream == "BerlinCheck");
  CHECK(region.source_stream == "Berlin");
  CHECK(region.record_count == 4);
  CHECK(region.offset_start == 1);  // Tempelhof 18:30
  CHECK(region.offset_end == 4);    // Brandenburg 19:20
  auto region_payload = read_file(config.resolve(region.payload_path));
  CHECK(region_payload.find("21.5") != std::string::npos);
  CHECK(std::count(region_payload.begin(), region_payload.end(), '\n') == 4);

  // Every checkpoint is on its configured chain stream, keyed by windowId.
  for (const auto& stream : config.all_streams()) {
    for (const auto& item : ledger.list_items(stream)) {
      auto parsed = checkpoint_from_json(item.value);
      CHECK(parsed == checkpoints.at(item.key));
      CHECK(parsed.blockchain_stream == stream);
    }
  }
  CHECK(ledger.list_items("BrandenburgCheck").size() == 3);
  CHECK(ledger.list_items("BerlinCheck").size() == 3);

  // Results rows: the fixture window averages exactly 21.
  auto results = read_ndjson(config.results_path());
  CHECK(results.size() == 9);
  bool found_fixture = false;
  bool found_region = false;
  for (const auto& row : results) {
    if (row["windowId"] == kWindow18Id) {
      found_fixture = true;
      CHECK(row["scope"] == "Berlin Brandenburg");
      CHECK(row["min"] == 19.8);
      CHECK(row["max"] == 22.4);
      CHECK(row["avg"] == 21);
      CHECK(row["count"] == 3);
    }
    if (row["windowId"] == kRegion18Id) {
      found_region = true;
      CHECK(row["scope"] == "Berlin");
      CHECK(row["min"] == 19.8);
      CHECK(row["max"] == 22.4);
      CHECK(row["avg"] == 21.12);  // 84.5/4, half-even
      CHECK(row["count"] == 4);
    }
  }
  CHECK(found_fixture);
  CHECK(found_region);
  fs::remove_all(dir);
}

TEST_CASE("without flush the tail windows stay open") {
  auto dir = make_corpus("noflush");
  auto config = load_config(dir / "config.json");
  SimLedger ledger(SimLedgerConfig{});
  Pipeline pipeline(config, ledger);
  auto stats = pipeline.run(false);
  CHECK(stats.windows_sealed == 6);
  auto checkpoints = checkpoints_by_window(config);
  CHECK(checkpoints.size() == 6);
  for (const auto& [id, cp] : checkpoints) {
    (void)cp;
    CHECK(id.find("20:00:00Z_2025-12-02T22") == std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("merge order does not change sealed artifacts") {
  auto dir_rr = make_corpus("order_rr");
  auto dir_seq = make_corpus("order_seq");
  auto config_rr = load_config(dir_rr / "config.json");
  auto config_seq = load_config(dir_seq / "config.json");

  SimLedger ledger_rr(SimLedgerConfig{});
  SimLedger ledger_seq(SimLedgerConfig{});
  Pipeline(config_rr, ledger_rr).run(true, MergeOrder::RoundRobin);
  Pipeline(config_seq, ledger_seq).run(true, MergeOrder::Sequential);

  auto cps_rr = checkpoints_by_window(config_rr);
  auto cps_seq = checkpoints_by_window(config_seq);
  REQUIRE(cps_rr.size() == cps_seq.size());
  for (const auto& [id, cp] : cps_rr) {
    REQUIRE(cps_seq.count(id) == 1);
    CHECK(checkpoint_to_json(cp) == checkpoint_to_json(cps_seq.at(id)));
  }

  // Payload files are byte-identical.
  for (const auto& entry : fs::directory_iterator(config_rr.payload_dir())) {
    auto other = config_seq.payload_dir() / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(read_file(entry.path()) == read_file(other));
  }

  // Results rows match as sets (seal order may differ).
  auto rows_rr = read_ndjson(config_rr.results_path());
  auto rows_seq = read_ndjson(config_seq.results_path());
  auto as_sorted_text = [](const std::vector<json>& rows) {
    std::vector<std::string> texts;
    for (const auto& row : rows) {
      texts.push_back(row.dump());
    }
    std::sort(texts.begin(), texts.end());
    return texts;
  };
  CHECK(as_sorted_text(rows_rr) == as_sorted_text(rows_seq));

  fs::remove_all(dir_rr);
  fs::remove_all(dir_seq);
}

TEST_CASE("two identical fresh runs are byte-identical, txids included") {
  auto dir_a = make_corpus("det_a");
  auto dir_b = make_corpus("det_b");
  auto config_a = load_config(dir_a / "config.json");
  auto config_b = load_config(dir_b / "config.json");

  SimLedgerConfig sim_a;
  sim_a.journal_path = config_a.resolve(config_a.ledger.endpoint);
  SimLedgerConfig sim_b;
  sim_b.journal_path = config_b.resolve(config_b.ledger.endpoint);
  {
    SimLedger ledger(sim_a);
    Pipeline(config_a, ledger).run(true);
  }
  {
    SimLedger ledger(sim_b);
    Pipeline(config_b, ledger).run(true);
  }

  CHECK(read_file(config_a.mirror_log_path()) == read_file(config_b.mirror_log_path()));
  CHECK(read_file(config_a.results_path()) == read_file(config_b.results_path()));
  CHECK(read_file(sim_a.journal_path) == read_file(sim_b.journal_path));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("rerun over the same directory reproduces identical checkpoints") {
  auto dir = make_corpus("rerun");
  auto config = load_config(dir / "config.json");
  SimLedger ledger(SimLedgerConfig{});
  Pipeline(config, ledger).run(true);
  auto first = checkpoints_by_window(config);

  SimLedger ledger2(SimLedgerConfig{});
  Pipeline(config, ledger2).run(true);  // payload rewrites are no-ops
  auto second = checkpoints_by_window(config);

  REQUIRE(first.size() == second.size());
  for (const auto& [id, cp] : first) {
    CHECK(checkpoint_to_json(cp) == checkpoint_to_json(second.at(id)));
  }
  fs::remove_all(dir);
}

TEST_CASE("exact duplicates are removed; offsets span the raw batch") {
  auto dir = make_corpus("dupes", false);
  // Rebuild Brandenburg with a duplicated observation inside one window.
  std::ofstream bb(dir / "Brandenburg.ndjson", std::ios::trunc);
  bb << kBrandenburgLines[2] << "\n";  // 18:10, offset 0
  bb << kBrandenburgLines[3] << "\n";  // 18:40, offset 1
  bb << kBrandenburgLines[2] << "\n";  // duplicate of 18:10, offset 2
  bb.close();
  std::ofstream(dir / "Tempelhof.ndjson", std::ios::trunc)
      << kTempelhofLines[1] << "\n";

  auto config = load_config(dir / "config.json");
  SimLedger ledger(SimLedgerConfig{});
  Pipeline pipeline(config, ledger);
  auto stats = pipeline.run(true);
  CHECK(stats.duplicates_removed == 1);

  auto checkpoints = checkpoints_by_window(config);
  const auto& cp = checkpoints.at(kWindow18Id);
  CHECK(cp.record_count == 2);   // deduped payload
  CHECK(cp.offset_start == 0);
  CHECK(cp.offset_end == 2);     // raw ingest counters, duplicate included
  auto payload = read_file(config.resolve(cp.payload_path));
  CHECK(std::count(payload.begin(), payload.end(), '\n') == 2);
  fs::remove_all(dir);
}

TEST_CASE("late records are dropped and leave no trace in payloads") {
  auto dir = make_corpus("late", false);
  std::ofstream bb(dir / "Brandenburg.ndjson", std::ios::trunc);
  bb << kBrandenburgLines[0] << "\n";  // 17:10
  bb << kBrandenburgLines[5] << "\n";  // 20:05 closes the 16:00 window
  bb << kBrandenburgLines[1] << "\n";  // 17:50 arrives too late
  bb.close();
  std::ofstream(dir / "Tempelhof.ndjson", std::ios::trunc)
      << kTempelhofLines[2] << "\n";

  auto config = load_config(dir / "config.json");
  SimLedger ledger(SimLedgerConfig{});
  Pipeline pipeline(config, ledger);
  auto stats = pipeline.run(true, MergeOrder::Sequential);
  CHECK(stats.records_ingested == 4);
  CHECK(stats.records_dropped_late == 1);

  auto checkpoints = checkpoints_by_window(config);
  auto id16 = "Berlin Brandenburg:2025-12-02T16:00:00Z_2025-12-02T18:00:00Z";
  REQUIRE(checkpoints.count(id16) == 1);
  CHECK(checkpoints.at(id16).record_count == 1);
  auto payload = read_file(config.resolve(checkpoints.at(id16).payload_path));
  CHECK(payload.find("17:50") == std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("grace keeps a window open past its end") {
  auto dir = make_corpus("grace", false);
  std::ofstream bb(dir / "Brandenburg.ndjson", std::ios::trunc);
  bb << kBrandenburgLines[0] << "\n";  // 17:10
  bb << kBrandenburgLines[2] << "\n";  // 18:10: within grace of the 16:00 window
  bb << kBrandenburgLines[1] << "\n";  // 17:50: not late thanks to grace
  bb.close();
  std::ofstream(dir / "Tempelhof.ndjson", std::ios::trunc)
      << kTempelhofLines[0] << "\n";

  auto doc = json::parse(read_file(dir / "config.json"));
  doc["window"]["graceSeconds"] = 900;
  std::ofstream(dir / "config.json", std::ios::trunc) << doc.dump(2);

  auto config = load_config(dir / "config.json");
  SimLedger ledger(SimLedgerConfig{});
  Pipeline pipeline(config, ledger);
  auto stats = pipeline.run(true, MergeOrder::Sequential);
  CHECK(stats.records_dropped_late == 0);

  auto checkpoints = checkpoints_by_window(config);
  auto id16 = "Berlin Brandenburg:2025-12-02T16:00:00Z_2025-12-02T18:00:00Z";
  CHECK(checkpoints.at(id16).record_count == 2);
  fs::remove_all(dir);
}

TEST_CASE("unreachable ledger parks checkpoints; retry drains the park") {
  auto dir = make_corpus("park");
  auto config = load_config(dir / "config.json");

  SimLedger flaky(SimLedgerConfig{});
  flaky.set_unreachable(true);
  Pipeline first(config, flaky);
  PipelineStats stats;
  // finalize() also fails while unreachable; the run itself must not throw.
  try {
    stats = first.run(true);
  } catch (const LedgerUnreachableError&) {
    stats = first.stats();
  }
  CHECK(stats.windows_sealed == 9);
  CHECK(stats.checkpoints_parked == 9);
  REQUIRE(fs::exists(config.parked_path()));
  CHECK(read_ndjson(config.parked_path()).size() == 9);
  CHECK(checkpoints_by_window(config).empty());  // nothing anchored yet

  SimLedger healthy(SimLedgerConfig{});
  Pipeline second(config, healthy);
  second.retry_parked();
  CHECK(second.stats().checkpoints_retried == 9);
  CHECK_FALSE(fs::exists(config.parked_path()));
  healthy.finalize();
  CHECK(healthy.list_items("BrandenburgCheck").size() == 3);
  CHECK(checkpoints_by_window(config).size() == 9);
  fs::remove_all(dir);
}

TEST_CASE("partial outage parks only the denied stream") {
  auto dir = make_corpus("deny");
  auto config = load_config(dir / "config.json");
  SimLedgerConfig sim;
  sim.deny_streams = {"TempelhofCheck"};
  SimLedger ledger(sim);
  Pipeline pipeline(config, ledger);
  auto stats = pipeline.run(true);
  CHECK(stats.checkpoints_parked == 3);
  auto parked = read_ndjson(config.parked_path());
  REQUIRE(parked.size() == 3);
  for (const auto& row : parked) {
    CHECK(row["stream"] == "TempelhofCheck");
  }

  SimLedger open_ledger(SimLedgerConfig{});
  Pipeline retrier(config, open_ledger);
  retrier.retry_parked();
  CHECK(retrier.stats().checkpoints_retried == 3);
  CHECK_FALSE(fs::exists(config.parked_path()));
  fs::remove_all(dir);
}

TEST_CASE("changed source content conflicts with an existing payload") {
  auto dir = make_corpus("conflict", false);
  auto config = load_config(dir / "config.json");
  {
    SimLedger ledger(SimLedgerConfig{});
    Pipeline(config, ledger).run(true);
  }
  // Same window, different reading: the sealed payload must not be replaced.
  auto source_path = dir / "Brandenburg.ndjson";
  auto content = read_file(source_path);
  auto pos = content.find("22.4");
  REQUIRE(pos != std::string::npos);
  content.replace(pos, 4, "-9.9");
  std::ofstream bb(source_path, std::ios::binary | std::ios::trunc);
  bb << content;
  bb.close();
  SimLedger ledger(SimLedgerConfig{});
  Pipeline pipeline(config, ledger);
  CHECK_THROWS_AS(pipeline.run(true), ExistsConflictError);
  fs::remove_all(dir);
}

TEST_CASE("records from unconfigured sources are rejected") {
  auto dir = make_corpus("unknown");
  auto config = load_config(dir / "config.json");
  SimLedger ledger(SimLedgerConfig{});
  Pipeline pipeline(config, ledger);
  Record record;
  record.source_stream = "Nowhere";
  record.event_time = 0;
  record.temperature = 1;
  CHECK_THROWS_AS(pipeline.process(record), ParseError);
  fs::remove_all(dir);
}
