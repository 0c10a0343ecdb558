#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rwsample {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the command-line tool. args excludes the program name.
/// Output goes to `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace rwsample
