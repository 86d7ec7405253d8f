#pragma once

#include <ostream>

namespace mves::cli {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,        // checks failed, no successful sweep row, internal errors
  kUsageError = 2,     // bad flags, unreadable or malformed config / CSV
  kDataRejected = 3,   // rank-deficient or off-simplex input data
};

/// Entry point of the `mves` tool; all output goes to the given streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mves::cli
