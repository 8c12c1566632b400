#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace selfnorm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `selfnorm` tool. Returns the process exit code:
/// 0 success, 1 invariant failure, 2 usage or configuration error.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Same, with argv[0] omitted.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace selfnorm::cli
