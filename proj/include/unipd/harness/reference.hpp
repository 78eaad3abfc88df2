#ifndef UNIPD_HARNESS_REFERENCE_HPP
#define UNIPD_HARNESS_REFERENCE_HPP

#include <cstdint>
#include <string>

#include "unipd/harness/generators.hpp"

namespace unipd::harness {

struct ReferenceRunOptions {
  long max_iter = 1000000;
  /// Stop once kkt_residual falls below this.
  double kkt_tol = 1e-10;
  long check_interval = 100;
  /// When non-empty, results are cached here keyed by the problem JSON hash.
  std::string cache_path;
};

/// FNV-1a hash of the problem JSON (reference block excluded).
std::uint64_t problem_key(const Instance& inst);

/// Numerical reference from a long CP-AL run with certified step sizes.
/// Used where no planted solution exists (L1L1). Reads and writes the cache.
ReferenceSolution compute_reference(const Instance& inst, const ReferenceRunOptions& opts = {});

}  // namespace unipd::harness

#endif  // UNIPD_HARNESS_REFERENCE_HPP
