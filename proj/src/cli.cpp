#include <streamseal/cli.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <streamseal/auditor.hpp>
#include <streamseal/bench.hpp>
#include <streamseal/config.hpp>
#include <streamseal/errors.hpp>
#include <streamseal/generator.hpp>
#include <streamseal/ledger_rpc.hpp>
#include <streamseal/ledger_sim.hpp>
#include <streamseal/pipeline.hpp>
#include <streamseal/time_iso.hpp>

namespace streamseal {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::unique_ptr<LedgerBackend> make_ledger(const ToolConfig& config) {
  if (config.ledger.backend == "sim") {
    SimLedgerConfig sim;
    sim.journal_path = config.resolve(config.ledger.endpoint);
    sim.block_interval_seconds = config.ledger.block_interval_seconds;
    sim.block_capacity = config.ledger.block_capacity;
    if (!config.ledger.miners.empty()) {
      sim.miners = config.ledger.miners;
    }
    sim.publish_latency_micros = config.ledger.publish_latency_micros;
    sim.validation_nanos_per_byte = config.ledger.validation_nanos_per_byte;
    sim.max_item_bytes = config.ledger.max_item_bytes;
    sim.deny_streams = config.ledger.deny_streams;
    return std::make_unique<SimLedger>(std::move(sim));
  }
  RpcLedgerConfig rpc;
  rpc.endpoint = config.ledger.endpoint;
  rpc.user = config.ledger.rpc_user;
  rpc.password = config.ledger.rpc_password;
  rpc.max_item_bytes = config.ledger.max_item_bytes;
  return std::make_unique<RpcLedger>(std::move(rpc));
}

const char* check_order[] = {"checkpointFound", "payloadReadable", "payloadHashMatch",
                             "countMatch",      "rootMatch",       "aggregatesMatch"};

void print_verdict(const AuditVerdict& verdict, std::ostream& out) {
  out << "window  " << verdict.window_id << "\n";
  out << "status  " << (verdict.verified ? "Verified" : "Failed") << "\n";
  for (const char* name : check_order) {
    auto it = verdict.checks.find(name);
    if (it == verdict.checks.end()) {
      continue;
    }
    const auto& check = it->second;
    const char* state = check.state == CheckState::Pass
                            ? "Pass"
                            : (check.state == CheckState::Fail ? "Fail" : "Skipped");
    out << "  " << std::left << std::setw(17) << name << state;
    if (check.state == CheckState::Fail) {
      out << " (expected " << check.expected << ", got " << check.actual << ")";
    } else if (!check.note.empty()) {
      out << " (" << check.note << ")";
    } else if (!check.actual.empty()) {
      out << " (" << check.actual << ")";
    }
    out << "\n";
  }
}

// Maps a windowId to the ledger stream configured for its source scope.
std::string stream_for_window(const ToolConfig& config, const std::string& window_id) {
  auto key = parse_window_id(window_id);
  if (!key) {
    throw ConfigError("windowId does not parse: " + window_id);
  }
  for (const auto& source : config.sources) {
    if (source.name == key->source_stream) {
      return source.stream;
    }
  }
  if (config.region && config.region->name == key->source_stream) {
    return config.region->stream;
  }
  throw ConfigError("no configured stream for source \"" + key->source_stream + "\"");
}

struct CliState {
  std::string config_path = "config.json";
  bool json = false;
};

int do_run(const CliState& state, bool flush_at_eof, std::ostream& out) {
  auto config = load_config(state.config_path);
  auto ledger = make_ledger(config);
  Pipeline pipeline(config, *ledger);
  auto stats = pipeline.run(flush_at_eof);
  if (state.json) {
    nlohmann::json doc;
    doc["recordsIngested"] = stats.records_ingested;
    doc["windowsSealed"] = stats.windows_sealed;
    doc["recordsDroppedLate"] = stats.records_dropped_late;
    doc["duplicatesRemoved"] = stats.duplicates_removed;
    doc["checkpointsParked"] = stats.checkpoints_parked;
    doc["checkpointsRetried"] = stats.checkpoints_retried;
    out << doc.dump() << "\n";
  } else {
    out << "ingested " << stats.records_ingested << " records, sealed "
        << stats.windows_sealed << " windows";
    if (stats.records_dropped_late > 0) {
      out << ", dropped " << stats.records_dropped_late << " late";
    }
    if (stats.checkpoints_parked > 0) {
      out << ", parked " << stats.checkpoints_parked;
    }
    if (stats.checkpoints_retried > 0) {
      out << ", retried " << stats.checkpoints_retried;
    }
    out << "\n";
  }
  return kExitOk;
}

int do_audit_window(const CliState& state, const std::string& id,
                    const std::string& stream, bool strict,
                    const std::string& results, std::ostream& out) {
  auto config = load_config(state.config_path);
  auto ledger = make_ledger(config);
  MirrorLog mirror(config.mirror_log_path());
  AuditorOptions options;
  options.strict = strict;
  options.resolve_base = config.config_dir;
  if (!results.empty()) {
    options.results_path = config.resolve(results);
  }
  Auditor auditor(ledger.get(), &mirror, options);
  auto verdict = auditor.verify_window(id, stream);
  if (state.json) {
    out << verdict.to_json().dump() << "\n";
  } else {
    print_verdict(verdict, out);
  }
  return verdict.verified ? kExitOk : kExitVerificationFailed;
}

int do_audit_all(const CliState& state, bool strict, const std::string& results,
                 std::ostream& out) {
  auto config = load_config(state.config_path);
  auto ledger = make_ledger(config);
  MirrorLog mirror(config.mirror_log_path());
  AuditorOptions options;
  options.strict = strict;
  options.resolve_base = config.config_dir;
  if (!results.empty()) {
    options.results_path = config.resolve(results);
  }
  Auditor auditor(ledger.get(), &mirror, options);
  auto summary = auditor.verify_all(config.all_streams());
  if (state.json) {
    nlohmann::json doc;
    doc["verified"] = summary.verified;
    doc["failed"] = summary.failed;
    doc["errors"] = summary.errors;
    nlohmann::json windows = nlohmann::json::array();
    for (const auto& verdict : summary.verdicts) {
      windows.push_back(verdict.to_json());
    }
    doc["windows"] = windows;
    out << doc.dump() << "\n";
  } else {
    for (const auto& verdict : summary.verdicts) {
      out << (verdict.verified ? "Verified " : "FAILED   ") << verdict.window_id << "\n";
    }
    for (const auto& error : summary.errors) {
      out << "error    " << error << "\n";
    }
    out << summary.verified << " verified, " << summary.failed << " failed\n";
  }
  bool ok = summary.failed == 0 && summary.errors.empty();
  return ok ? kExitOk : kExitVerificationFailed;
}

int do_audit_record(const CliState& state, const std::string& id,
                    const std::string& record_file, std::string stream,
                    std::ostream& out) {
  auto config = load_config(state.config_path);
  if (stream.empty()) {
    stream = stream_for_window(config, id);
  }
  std::ifstream in(record_file, std::ios::binary);
  if (!in) {
    throw IoError("cannot read record file " + record_file);
  }
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    throw ParseError("record file is not valid JSON: " + record_file);
  }
  auto record = record_from_json(doc);

  auto ledger = make_ledger(config);
  MirrorLog mirror(config.mirror_log_path());
  AuditorOptions options;
  options.resolve_base = config.config_dir;
  Auditor auditor(ledger.get(), &mirror, options);
  auto verdict =
      auditor.verify_record(id, stream, record, CanonicalConfig{config.exclude_fields});
  if (state.json) {
    nlohmann::json doc_out;
    doc_out["windowId"] = id;
    doc_out["membership"] = verdict.pass ? "Pass" : "Fail";
    doc_out["note"] = verdict.note;
    out << doc_out.dump() << "\n";
  } else {
    out << (verdict.pass ? "Pass" : "Fail") << ": " << verdict.note << "\n";
  }
  return verdict.pass ? kExitOk : kExitVerificationFailed;
}

int do_ledger_list(const CliState& state, const std::string& stream,
                   std::int64_t from_height, std::ostream& out) {
  auto config = load_config(state.config_path);
  auto ledger = make_ledger(config);
  std::vector<std::string> streams =
      stream.empty() ? config.all_streams() : std::vector<std::string>{stream};
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& name : streams) {
    std::vector<StreamItem> items;
    try {
      items = ledger->list_items(name, from_height);
    } catch (const UnknownStreamError&) {
      continue;  // stream not created yet
    }
    for (const auto& item : items) {
      if (state.json) {
        nlohmann::json row;
        row["stream"] = name;
        row["key"] = item.key;
        row["txid"] = item.txid;
        row["blockHeight"] = item.block_height;
        row["confirmedAt"] = render_utc(item.confirmed_at);
        row["value"] = item.value;
        doc.push_back(row);
      } else {
        out << name << " h=" << item.block_height << " "
            << render_utc(item.confirmed_at) << " key=" << item.key
            << " txid=" << item.txid.substr(0, 16) << "\n";
      }
    }
  }
  if (state.json) {
    out << doc.dump() << "\n";
  }
  return kExitOk;
}

int do_ledger_sim_tick(const CliState& state, std::int64_t steps, std::ostream& out) {
  auto config = load_config(state.config_path);
  if (config.ledger.backend != "sim") {
    throw ConfigError("ledger sim-tick requires the sim backend");
  }
  auto ledger = make_ledger(config);
  auto* sim = dynamic_cast<SimLedger*>(ledger.get());
  std::int64_t now =
      sim->now_seconds() + steps * config.ledger.block_interval_seconds;
  auto confirmations = sim->tick(now);
  if (state.json) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& conf : confirmations) {
      nlohmann::json row;
      row["txid"] = conf.txid;
      row["stream"] = conf.stream;
      row["key"] = conf.key;
      row["blockHeight"] = conf.block_height;
      row["confirmedAt"] = render_utc(conf.confirmed_at);
      row["miner"] = conf.miner;
      doc.push_back(row);
    }
    out << doc.dump() << "\n";
  } else {
    out << "confirmed " << confirmations.size() << " transactions, height now "
        << sim->block_height() << "\n";
  }
  return kExitOk;
}

int do_bench_verify(const CliState& state, const std::string& corpus, int reps,
                    const std::string& out_csv, std::ostream& out) {
  auto config = load_config(std::filesystem::path(corpus) / "config.json");
  auto ledger = make_ledger(config);
  MirrorLog mirror(config.mirror_log_path());
  AuditorOptions options;
  options.resolve_base = config.config_dir;
  Auditor auditor(ledger.get(), &mirror, options);

  std::vector<std::pair<std::string, std::string>> windows;
  for (const auto& stream : config.all_streams()) {
    std::set<std::string> seen;
    try {
      for (const auto& item : ledger->list_items(stream)) {
        if (seen.insert(item.key).second) {
          windows.emplace_back(item.key, stream);
        }
      }
    } catch (const LedgerError&) {
      for (const auto& entry : mirror.read_all()) {
        if (entry.checkpoint.blockchain_stream == stream &&
            seen.insert(entry.checkpoint.window_id).second) {
          windows.emplace_back(entry.checkpoint.window_id, stream);
        }
      }
    }
  }

  auto report = bench_verify(auditor, windows, reps);
  export_latency_csv(report.samples, out_csv);
  if (state.json) {
    nlohmann::json doc;
    doc["samples"] = report.samples.size();
    doc["alphaNanosPerRecord"] = report.fit.alpha;
    doc["betaNanos"] = report.fit.beta;
    doc["r2"] = report.fit.r2;
    doc["meanThroughputPerSec"] = report.mean_throughput;
    doc["windowsFailed"] = report.windows_failed;
    doc["csv"] = out_csv;
    out << doc.dump() << "\n";
  } else {
    out << "fit T(n) = " << report.fit.alpha << "*n + " << report.fit.beta
        << " ns (r2 " << report.fit.r2 << ") over " << report.samples.size()
        << " samples; mean throughput " << static_cast<std::int64_t>(report.mean_throughput)
        << " records/s\n";
  }
  return kExitOk;
}

int do_bench_tps(const CliState& state, int workers, std::int64_t payload_bytes,
                 std::int64_t tx, const std::string& out_csv,
                 const std::string& stream, std::ostream& out) {
  auto config = load_config(state.config_path);
  auto ledger = make_ledger(config);
  auto report = bench_tps(*ledger, workers, payload_bytes, tx, stream);
  export_tps_csv({report}, out_csv);
  if (state.json) {
    nlohmann::json doc;
    doc["streamName"] = report.stream_name;
    doc["workers"] = report.workers;
    doc["payloadBytes"] = report.payload_bytes;
    doc["txCount"] = report.tx_count;
    if (report.tps) {
      doc["confirmedTps"] = *report.tps;
    }
    doc["apiTps"] = report.api_tps;
    doc["workerErrors"] = report.worker_errors;
    doc["csv"] = out_csv;
    out << doc.dump() << "\n";
  } else {
    out << "confirmed " << report.tx_count << " tx";
    if (report.tps) {
      out << ", confirmed TPS " << *report.tps;
    }
    out << ", API TPS " << report.api_tps << "\n";
  }
  return report.worker_errors.empty() ? kExitOk : kExitIo;
}

int do_gen(std::uint64_t seed, int stations, std::int64_t hours,
           std::int64_t interval_seconds, const std::string& out_dir,
           const std::string& start, bool json, std::ostream& out) {
  std::int64_t start_time = 1764547200;  // 2025-12-01T00:00:00Z
  if (!start.empty()) {
    auto parsed = try_parse_utc(start);
    if (!parsed) {
      throw ConfigError("gen --start: not an ISO-8601 UTC timestamp");
    }
    start_time = *parsed;
  }
  auto config_path =
      write_generated_corpus(out_dir, seed, stations, hours, interval_seconds, start_time);
  if (json) {
    nlohmann::json doc;
    doc["configPath"] = config_path.string();
    doc["stations"] = stations;
    doc["hours"] = hours;
    out << doc.dump() << "\n";
  } else {
    out << "wrote corpus config " << config_path.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"stream provenance sealing and audit toolkit"};
  app.require_subcommand(1);

  CliState state;
  app.add_option("--config", state.config_path, "config file path")
      ->envname("STREAMSEAL_CONFIG");
  app.add_flag("--json", state.json, "machine-readable output");

  auto* cmd_run = app.add_subcommand("run", "run the sealing pipeline");
  bool flush_at_eof = false;
  cmd_run->add_flag("--flush-at-eof", flush_at_eof, "seal windows still open at EOF");

  auto* cmd_audit = app.add_subcommand("audit", "verify sealed windows");
  cmd_audit->require_subcommand(1);

  auto* cmd_audit_window = cmd_audit->add_subcommand("window", "verify one window");
  std::string audit_id;
  std::string audit_stream;
  std::string audit_results;
  bool audit_strict = false;
  cmd_audit_window->add_option("--id", audit_id, "windowId")->required();
  cmd_audit_window->add_option("--stream", audit_stream, "ledger stream")->required();
  cmd_audit_window->add_flag("--strict", audit_strict, "any failing check fails");
  cmd_audit_window->add_option("--results", audit_results, "results NDJSON to check");

  auto* cmd_audit_all = cmd_audit->add_subcommand("all", "verify every anchored window");
  bool audit_all_strict = false;
  std::string audit_all_results;
  cmd_audit_all->add_flag("--strict", audit_all_strict, "any failing check fails");
  cmd_audit_all->add_option("--results", audit_all_results, "results NDJSON to check");

  auto* cmd_audit_record = cmd_audit->add_subcommand("record", "verify one record");
  std::string record_id;
  std::string record_file;
  std::string record_stream;
  cmd_audit_record->add_option("--id", record_id, "windowId")->required();
  cmd_audit_record->add_option("--record-file", record_file, "record JSON file")
      ->required();
  cmd_audit_record->add_option("--stream", record_stream,
                               "ledger stream (default: from windowId)");

  auto* cmd_ledger = app.add_subcommand("ledger", "inspect or advance the ledger");
  cmd_ledger->require_subcommand(1);
  auto* cmd_ledger_list = cmd_ledger->add_subcommand("list", "list stream items");
  std::string list_stream;
  std::int64_t list_from_height = 0;
  cmd_ledger_list->add_option("--stream", list_stream, "stream name (default: all)");
  cmd_ledger_list->add_option("--from-height", list_from_height, "minimum block height");
  auto* cmd_ledger_tick = cmd_ledger->add_subcommand("sim-tick", "advance simulated time");
  std::int64_t tick_steps = 1;
  cmd_ledger_tick->add_option("--steps", tick_steps, "block intervals to advance");

  auto* cmd_bench = app.add_subcommand("bench", "performance measurements");
  cmd_bench->require_subcommand(1);
  auto* cmd_bench_verify = cmd_bench->add_subcommand("verify", "verification scaling");
  std::string bench_corpus;
  int bench_reps = 3;
  std::string bench_verify_out;
  cmd_bench_verify->add_option("--corpus", bench_corpus, "corpus directory")->required();
  cmd_bench_verify->add_option("--reps", bench_reps, "repetitions");
  cmd_bench_verify->add_option("--out", bench_verify_out, "CSV output path")->required();
  auto* cmd_bench_tps = cmd_bench->add_subcommand("tps", "ledger throughput");
  int tps_workers = 4;
  std::int64_t tps_payload = 256;
  std::int64_t tps_tx = 100;
  std::string tps_out;
  std::string tps_stream = "bench";
  cmd_bench_tps->add_option("--workers", tps_workers, "concurrent publishers");
  cmd_bench_tps->add_option("--payload-bytes", tps_payload, "item size");
  cmd_bench_tps->add_option("--tx", tps_tx, "items per worker");
  cmd_bench_tps->add_option("--out", tps_out, "CSV output path")->required();
  cmd_bench_tps->add_option("--stream", tps_stream, "bench stream name");

  auto* cmd_gen = app.add_subcommand("gen", "generate a synthetic corpus");
  std::uint64_t gen_seed = 1;
  int gen_stations = 2;
  std::int64_t gen_hours = 48;
  std::int64_t gen_interval = 600;
  std::string gen_out;
  std::string gen_start;
  cmd_gen->add_option("--seed", gen_seed, "generator seed");
  cmd_gen->add_option("--stations", gen_stations, "station count");
  cmd_gen->add_option("--hours", gen_hours, "hours of readings");
  cmd_gen->add_option("--interval-seconds", gen_interval, "reading cadence");
  cmd_gen->add_option("--out", gen_out, "output directory")->required();
  cmd_gen->add_option("--start", gen_start, "first reading time (ISO-8601 Z)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& error) {
    err << "usage error: " << error.what() << "\n";
    return kExitUsage;
  }

  try {
    if (cmd_run->parsed()) {
      return do_run(state, flush_at_eof, out);
    }
    if (cmd_audit_window->parsed()) {
      return do_audit_window(state, audit_id, audit_stream, audit_strict, audit_results,
                             out);
    }
    if (cmd_audit_all->parsed()) {
      return do_audit_all(state, audit_all_strict, audit_all_results, out);
    }
    if (cmd_audit_record->parsed()) {
      return do_audit_record(state, record_id, record_file, record_stream, out);
    }
    if (cmd_ledger_list->parsed()) {
      return do_ledger_list(state, list_stream, list_from_height, out);
    }
    if (cmd_ledger_tick->parsed()) {
      return do_ledger_sim_tick(state, tick_steps, out);
    }
    if (cmd_bench_verify->parsed()) {
      return do_bench_verify(state, bench_corpus, bench_reps, bench_verify_out, out);
    }
    if (cmd_bench_tps->parsed()) {
      return do_bench_tps(state, tps_workers, tps_payload, tps_tx, tps_out, tps_stream,
                          out);
    }
    if (cmd_gen->parsed()) {
      return do_gen(gen_seed, gen_stations, gen_hours, gen_interval, gen_out, gen_start,
                    state.json, out);
    }
    err << "usage error: no subcommand\n";
    return kExitUsage;
  } catch (const ConfigError& error) {
    err << "config error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const InsufficientDataError& error) {
    err << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const Error& error) {
    err << "error: " << error.what() << "\n";
    return kExitIo;
  } catch (const std::exception& error) {
    err << "error: " << error.what() << "\n";
    return kExitIo;
  }
}

}  // namespace streamseal
