#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace soca::cli {

/// Exit codes: 0 success, 2 invalid input, 3 infeasible or degenerate rate
/// equation, 4 type-count cap exceeded.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitCapExceeded = 4;

/// Dispatches one invocation. args excludes the program name. Scalar results
/// go to out as name=value lines, studies as CSV; diagnostics go to err.
/// Nothing is written to out on failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace soca::cli
