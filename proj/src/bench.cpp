#include <streamseal/bench.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <streamseal/errors.hpp>

namespace streamseal {

FitResult fit_least_squares(const std::vector<std::pair<double, double>>& points) {
  std::set<double> distinct;
  for (const auto& [x, y] : points) {
    (void)y;
    distinct.insert(x);
  }
  if (distinct.size() < 3) {
    throw InsufficientDataError("fit needs at least 3 distinct sizes, have " +
                                std::to_string(distinct.size()));
  }

  double n = static_cast<double>(points.size());
  double sum_x = 0.0;
  double sum_y = 0.0;
  for (const auto& [x, y] : points) {
    sum_x += x;
    sum_y += y;
  }
  double mean_x = sum_x / n;
  double mean_y = sum_y / n;

  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }

  FitResult fit;
  fit.alpha = sxy / sxx;
  fit.beta = mean_y - fit.alpha * mean_x;

  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (const auto& [x, y] : points) {
    double predicted = fit.alpha * x + fit.beta;
    ss_res += (y - predicted) * (y - predicted);
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  fit.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

VerifyBenchReport bench_verify(
    Auditor& auditor,
    const std::vector<std::pair<std::string, std::string>>& windows, int repetitions,
    bool warmup) {
  if (windows.empty() || repetitions < 1) {
    throw InsufficientDataError("bench verify needs windows and at least one rep");
  }

  if (warmup) {
    for (const auto& [id, stream] : windows) {
      auditor.verify_window(id, stream);
    }
  }

  VerifyBenchReport report;
  for (int rep = 0; rep < repetitions; ++rep) {
    for (const auto& [id, stream] : windows) {
      auto verdict = auditor.verify_window(id, stream);
      if (!verdict.verified) {
        ++report.windows_failed;
      }
      LatencySample sample;
      sample.window_id = id;
      sample.record_count = verdict.timing.record_count;
      sample.canonicalize_nanos = verdict.timing.canonicalize_nanos;
      sample.merkle_nanos = verdict.timing.merkle_nanos;
      sample.total_nanos = verdict.timing.total_nanos;
      report.samples.push_back(std::move(sample));
    }
  }

  std::vector<std::pair<double, double>> points;
  points.reserve(report.samples.size());
  double throughput_sum = 0.0;
  for (const auto& sample : report.samples) {
    points.emplace_back(static_cast<double>(sample.record_count),
                        static_cast<double>(sample.total_nanos));
    if (sample.total_nanos > 0) {
      throughput_sum += static_cast<double>(sample.record_count) /
                        (static_cast<double>(sample.total_nanos) * 1e-9);
    }
  }
  report.fit = fit_least_squares(points);
  report.mean_throughput = throughput_sum / static_cast<double>(report.samples.size());
  return report;
}

TpsReport bench_tps(LedgerBackend& ledger, int workers, std::int64_t payload_bytes,
                    std::int64_t tx_per_worker, const std::string& stream_name) {
  if (workers < 1 || tx_per_worker < 1 || payload_bytes < 1) {
    throw InsufficientDataError("bench tps needs positive workers, tx, and payload size");
  }
  ledger.ensure_stream(stream_name);

  TpsReport report;
  report.stream_name = stream_name;
  report.workers = workers;
  report.payload_bytes = payload_bytes;

  std::mutex mutex;
  std::set<std::string> txids;
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));

  auto wall_start = std::chrono::steady_clock::now();
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w]() {
      for (std::int64_t i = 0; i < tx_per_worker; ++i) {
        std::string key = "w" + std::to_string(w) + "-" + std::to_string(i);
        std::string value = key + "|";
        char filler = static_cast<char>('a' + (w * 31 + i) % 26);
        value.resize(static_cast<std::size_t>(payload_bytes), filler);
        try {
          auto receipt = ledger.publish(stream_name, key, value);
          std::lock_guard<std::mutex> lock(mutex);
          txids.insert(receipt.txid);
        } catch (const Error& error) {
          std::lock_guard<std::mutex> lock(mutex);
          report.worker_errors.push_back("worker " + std::to_string(w) + ": " +
                                         error.what());
          return;
        }
      }
    });
  }
  for (auto& thread : threads) {
    thread.join();
  }
  double wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                      wall_start)
                            .count();
  std::int64_t submitted = static_cast<std::int64_t>(txids.size());
  report.api_tps = wall_seconds > 0.0 ? static_cast<double>(submitted) / wall_seconds
                                      : static_cast<double>(submitted);

  ledger.finalize();

  for (const auto& item : ledger.list_items(stream_name)) {
    if (txids.count(item.txid) == 0) {
      continue;  // items from earlier runs on the same stream
    }
    ++report.tx_count;
    if (!report.first_confirm || item.confirmed_at < *report.first_confirm) {
      report.first_confirm = item.confirmed_at;
    }
    if (!report.last_confirm || item.confirmed_at > *report.last_confirm) {
      report.last_confirm = item.confirmed_at;
    }
  }
  if (report.tx_count >= 2 && report.first_confirm && report.last_confirm &&
      *report.last_confirm > *report.first_confirm) {
    report.tps = static_cast<double>(report.tx_count) /
                 static_cast<double>(*report.last_confirm - *report.first_confirm);
  }
  return report;
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  if (!path.parent_path().empty()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  return out;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

}  // namespace

void export_latency_csv(const std::vector<LatencySample>& samples,
                        const std::filesystem::path& path) {
  if (samples.empty()) {
    throw InsufficientDataError("no latency samples to export");
  }
  auto out = open_csv(path);
  out << "windowId,recordCount,canonicalizeNanos,merkleNanos,totalNanos\n";
  for (const auto& sample : samples) {
    out << '"' << sample.window_id << "\"," << sample.record_count << ','
        << sample.canonicalize_nanos << ',' << sample.merkle_nanos << ','
        << sample.total_nanos << '\n';
  }
  if (!out.flush()) {
    throw IoError("write failed for " + path.string());
  }
}

void export_tps_csv(const std::vector<TpsReport>& reports,
                    const std::filesystem::path& path) {
  if (reports.empty()) {
    throw InsufficientDataError("no TPS reports to export");
  }
  auto out = open_csv(path);
  out << "streamName,workers,payloadBytes,txCount,firstConfirm,lastConfirm,"
         "confirmedTps,apiTps\n";
  for (const auto& report : reports) {
    out << '"' << report.stream_name << "\"," << report.workers << ','
        << report.payload_bytes << ',' << report.tx_count << ','
        << (report.first_confirm ? std::to_string(*report.first_confirm) : "") << ','
        << (report.last_confirm ? std::to_string(*report.last_confirm) : "") << ','
        << (report.tps ? format_double(*report.tps) : "") << ','
        << format_double(report.api_tps) << '\n';
  }
  if (!out.flush()) {
    throw IoError("write failed for " + path.string());
  }
}

}  // namespace streamseal
