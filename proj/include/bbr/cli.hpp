#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bbr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailedCase = 1;
inline constexpr int kExitConfig = 2;

/// Entry point of the `bbr` tool. args excludes the program name. Reads the
/// BBR_ORDER environment variable for the default truncation order.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace bbr
