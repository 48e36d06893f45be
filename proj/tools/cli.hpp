#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cqmorph::cli {

inline constexpr int kExitFeasible = 0;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitUndetermined = 2;
inline constexpr int kExitUsage = 64;

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cqmorph::cli
