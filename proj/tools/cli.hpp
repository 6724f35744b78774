#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace exgs::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kIoFormat = 3;
inline constexpr int kInvariant = 4;

// Runs one command line (args excludes the program name). Diagnostics go to `err` as a
// single line; informational output goes to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace exgs::cli
