#pragma once

#include <iosfwd>

namespace rrg {

// Exit codes: 0 ok, 1 a check failed or a run aborted, 2 usage or config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rrg
