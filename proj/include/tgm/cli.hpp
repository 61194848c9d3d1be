#pragma once

// Command-line front end: solve, train, eval, uset, gen-modes.
//
// Every command reads an optional JSON config, applies flag overrides (flags
// win), writes the resolved config next to its outputs and is deterministic
// given (config, seed).

#include <iosfwd>

namespace tgm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Runs one command and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace tgm::cli
