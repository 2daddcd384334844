#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sartex::cli {

/// Exit codes: 0 success, 1 usage error, 2 data/format error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Same, with `args` excluding the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sartex::cli
