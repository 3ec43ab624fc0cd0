#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wcf {

// Exit statuses of wcf_forge.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitBadJson = 65;

/// Runs one wcf_forge command; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wcf
