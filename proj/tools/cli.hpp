#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hacdyn::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kRuntimeError = 2;
inline constexpr int kCellsFailed = 3;

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hacdyn::cli
