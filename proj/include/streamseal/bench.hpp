#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <streamseal/auditor.hpp>
#include <streamseal/ledger.hpp>

namespace streamseal {

struct LatencySample {
  std::string window_id;
  std::int64_t record_count = 0;
  std::int64_t canonicalize_nanos = 0;
  std::int64_t merkle_nanos = 0;
  std::int64_t total_nanos = 0;
};

struct FitResult {
  double alpha = 0.0;  // per-record nanos
  double beta = 0.0;   // fixed overhead nanos
  double r2 = 0.0;
};

// Least-squares fit of y = alpha * x + beta. Throws InsufficientDataError
// with fewer than three distinct x values.
FitResult fit_least_squares(const std::vector<std::pair<double, double>>& points);

struct VerifyBenchReport {
  std::vector<LatencySample> samples;
  FitResult fit;
  // records per second, averaged over samples
  double mean_throughput = 0.0;
  std::int64_t windows_failed = 0;
};

// Times verify_window over each (windowId, stream) pair `repetitions`
// times, after one untimed warm-up pass, and fits T(n).
VerifyBenchReport bench_verify(Auditor& auditor,
                               const std::vector<std::pair<std::string, std::string>>& windows,
                               int repetitions, bool warmup = true);

struct TpsReport {
  std::string stream_name;
  std::int64_t tx_count = 0;  // confirmed transactions from this run
  std::optional<std::int64_t> first_confirm;
  std::optional<std::int64_t> last_confirm;
  // txCount / (lastConfirm - firstConfirm); absent when txCount < 2 or the
  // confirmation span is zero
  std::optional<double> tps;
  double api_tps = 0.0;  // submissions per wall-clock second
  int workers = 0;
  std::int64_t payload_bytes = 0;
  std::vector<std::string> worker_errors;
};

// Spawns `workers` concurrent publishers, each sending tx_per_worker items
// of payload_bytes deterministic content, drains the backend, then computes
// confirmed TPS from the confirmation timestamps.
TpsReport bench_tps(LedgerBackend& ledger, int workers, std::int64_t payload_bytes,
                    std::int64_t tx_per_worker,
                    const std::string& stream_name = "bench");

// CSV schemas are documented in the README; both writers refuse empty data.
void export_latency_csv(const std::vector<LatencySample>& samples,
                        const std::filesystem::path& path);
void export_tps_csv(const std::vector<TpsReport>& reports,
                    const std::filesystem::path& path);

}  // namespace streamseal
