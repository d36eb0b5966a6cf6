#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace nbview::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name.
int run_main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace nbview::cli
