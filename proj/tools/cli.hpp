#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hide::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `hide` command line. `args[0]` is the program name.
/// Returns 0 on success, 1 on I/O failure, 2 on validation or usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker cap from HIDE_NUM_THREADS (falls back to the hardware concurrency).
unsigned thread_budget();

}  // namespace hide::cli
