#pragma once

#include <iosfwd>

namespace egbm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the egbm tool. Subcommands: synth, train, explain-local,
// shapes, predict, blackbox.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace egbm::cli
