#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace permfield {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation. args excludes the program name. Returns 0 on
/// success, 1 when a built-in assertion failed (reports are still written),
/// 2 on usage or configuration errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace permfield
