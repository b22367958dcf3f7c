#pragma once

#include <iosfwd>

namespace gselab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitInternal = 4;

/// Entry point of the gse-lab command line. Reports go to `out` as JSON,
/// diagnostics and usage text to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gselab
