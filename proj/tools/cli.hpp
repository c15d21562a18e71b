#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace onesided::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;

/// Entry point for the `onesided` tool. Subcommands: generate, estimate,
/// tune, sweep, distances. Returns 0 on success, 2 on configuration errors
/// and 1 on I/O errors; failures print one line to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload for tests: args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace onesided::cli
