#pragma once

// Command-line front end: update, track, dist, bench.
//
// Exit codes: 0 success, 1 domain error (Deflating, SingularW, RankDeficient
// and the other numerical failures), 2 usage or parse error.

#include <iosfwd>

namespace grood::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace grood::cli
