#pragma once

#include <cstddef>

namespace streamseal {

// Kernel execution mode. Parallel paths are OpenMP loops over independent
// elements and produce output bit-identical to Serial; Serial is the
// reference the tests compare against.
enum class ExecMode { Serial, Parallel };

// True when the build has OpenMP and the runtime offers more than one thread.
bool parallel_available();

// Small batches are not worth a fork-join.
inline constexpr std::size_t kParallelGrainSize = 256;

inline bool use_parallel(ExecMode mode, std::size_t n) {
  return mode == ExecMode::Parallel && n >= kParallelGrainSize;
}

}  // namespace streamseal
