#pragma once

#include <iosfwd>

namespace dsm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSolver = 3;

/// Runs the `dsm` command line. Returns the process exit code: 0 on success,
/// 2 for usage, configuration, format and domain errors, 3 for solver failures.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace dsm::cli
