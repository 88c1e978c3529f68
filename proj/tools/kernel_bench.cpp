// Compares the serial reference kernels against their OpenMP counterparts
// on synthetic batches and prints a timing table. Output parity is asserted
// on every run; a mismatch aborts with a nonzero exit.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <streamseal/canonical.hpp>
#include <streamseal/merkle.hpp>
#include <streamseal/parallel.hpp>
#include <streamseal/record.hpp>

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<streamseal::Record> make_records(std::size_t n) {
  std::vector<streamseal::Record> records;
  records.reserve(n);
  std::mt19937_64 rng(42);
  for (std::size_t i = 0; i < n; ++i) {
    streamseal::Record record;
    record.source_stream = "bench-station";
    record.event_time = 1764547200 + static_cast<std::int64_t>(i) * 7;
    double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    record.temperature = -20.0 + unit * 60.0;
    record.extras["humidityPct"] = static_cast<std::int64_t>(rng() % 101);
    record.extras["stationId"] = "BN-" + std::to_string(i % 16);
    records.push_back(std::move(record));
  }
  return records;
}

template <typename F>
double best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto start = Clock::now();
    fn();
    best = std::min(best, seconds_since(start));
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t max_n = 200000;
  int reps = 5;
  if (argc > 1) {
    max_n = static_cast<std::size_t>(std::stoull(argv[1]));
  }
  if (argc > 2) {
    reps = std::stoi(argv[2]);
  }

  std::printf("parallel runtime available: %s\n",
              streamseal::parallel_available() ? "yes" : "no");
  std::printf("%-22s %10s %12s %12s %8s\n", "kernel", "n", "serial_ms",
              "parallel_ms", "speedup");

  streamseal::CanonicalConfig config;
  for (std::size_t n = 1000; n <= max_n; n *= 10) {
    auto records = make_records(n);

    std::vector<streamseal::CanonicalRecord> canon_serial;
    std::vector<streamseal::CanonicalRecord> canon_parallel;
    double canon_s = best_of(reps, [&] {
      canon_serial =
          streamseal::canonicalize_batch(records, config, streamseal::ExecMode::Serial);
    });
    double canon_p = best_of(reps, [&] {
      canon_parallel =
          streamseal::canonicalize_batch(records, config, streamseal::ExecMode::Parallel);
    });
    for (std::size_t i = 0; i < n; ++i) {
      if (canon_serial[i].bytes != canon_parallel[i].bytes) {
        std::fprintf(stderr, "canonicalize mismatch at %zu\n", i);
        return 1;
      }
    }
    std::printf("%-22s %10zu %12.3f %12.3f %8.2f\n", "canonicalize", n, canon_s * 1e3,
                canon_p * 1e3, canon_s / canon_p);

    std::vector<std::string> lines;
    lines.reserve(n);
    for (auto& entry : canon_serial) {
      lines.push_back(entry.bytes);
    }

    std::vector<streamseal::Digest> leaves_serial;
    std::vector<streamseal::Digest> leaves_parallel;
    double leaf_s = best_of(reps, [&] {
      leaves_serial = streamseal::leaf_hashes(lines, streamseal::ExecMode::Serial);
    });
    double leaf_p = best_of(reps, [&] {
      leaves_parallel = streamseal::leaf_hashes(lines, streamseal::ExecMode::Parallel);
    });
    if (leaves_serial != leaves_parallel) {
      std::fprintf(stderr, "leaf_hashes mismatch at n=%zu\n", n);
      return 1;
    }
    std::printf("%-22s %10zu %12.3f %12.3f %8.2f\n", "leaf_hashes", n, leaf_s * 1e3,
                leaf_p * 1e3, leaf_s / leaf_p);

    streamseal::MerkleTree tree_serial;
    streamseal::MerkleTree tree_parallel;
    double tree_s = best_of(reps, [&] {
      tree_serial = streamseal::build_tree(leaves_serial, streamseal::ExecMode::Serial);
    });
    double tree_p = best_of(reps, [&] {
      tree_parallel = streamseal::build_tree(leaves_serial, streamseal::ExecMode::Parallel);
    });
    if (tree_serial.root() != tree_parallel.root()) {
      std::fprintf(stderr, "build_tree mismatch at n=%zu\n", n);
      return 1;
    }
    std::printf("%-22s %10zu %12.3f %12.3f %8.2f\n", "build_tree", n, tree_s * 1e3,
                tree_p * 1e3, tree_s / tree_p);
  }
  return 0;
}
