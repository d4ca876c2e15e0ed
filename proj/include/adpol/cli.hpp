#pragma once

#include <iosfwd>

namespace adpol {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // numerical or validation failure
inline constexpr int kExitUsage = 2;

/// Entry point for `adpol simulate | sweep | validate | protocols list`.
/// Reports go to `out`, diagnostics to `err`; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace adpol
