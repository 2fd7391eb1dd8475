#pragma once

#include <iosfwd>

namespace bathforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the bathforge executable; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Oracle self-checks; one PASS/FAIL line each, then the counts. Returns the failure count.
int selftest(std::ostream& out);

}  // namespace bathforge::cli
