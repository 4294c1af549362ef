#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bkgtfk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `bkgtfk` binary. `args` excludes the program name.
/// Subcommands: price, sweep, train, density.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// --threads when given (0 means all cores), else BKGTFK_THREADS, else all cores.
unsigned resolve_threads(int flag_value);

}  // namespace bkgtfk::cli
