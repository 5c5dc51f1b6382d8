#pragma once

#include <iosfwd>

namespace trustgate {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitGateNotPassed = 2;

// Entry point of the trust-gate command line. Reads TRUST_GATE_STORE,
// TRUST_GATE_CATALOG and TRUST_GATE_TOKEN from the environment.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trustgate
