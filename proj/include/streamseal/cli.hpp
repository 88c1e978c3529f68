#pragma once

#include <iosfwd>

namespace streamseal {

// Entry point behind main(). Exit codes: 0 success, 1 verification failed,
// 2 usage or config error, 3 I/O or ledger error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace streamseal
