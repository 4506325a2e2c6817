#pragma once

#include <ostream>

namespace mpdag::cli {

/// Exit codes of the command-line tool.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;         // usage, parse or IO error
inline constexpr int kNegative = 2;      // not identifiable, not truncatable, no adjustment set
inline constexpr int kVerifyFailed = 3;  // the oracle disagrees with the answer

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mpdag::cli
