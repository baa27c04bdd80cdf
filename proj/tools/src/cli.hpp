#pragma once

#include <iosfwd>

namespace sgs::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDesign = 2;
inline constexpr int kRuntime = 3;

// Entry point shared by the executable and the tests. Payload goes to
// `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sgs::cli
