#ifndef UNIPD_HARNESS_CLI_HPP
#define UNIPD_HARNESS_CLI_HPP

#include <iosfwd>

namespace unipd::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverged = 3;

/// Subcommands: solve, certify, bench, compare-admm. Unknown flags exit 2;
/// solver divergence exits 3 after flushing the partial trace.
int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace unipd::harness

#endif  // UNIPD_HARNESS_CLI_HPP
