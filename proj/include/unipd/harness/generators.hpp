#ifndef UNIPD_HARNESS_GENERATORS_HPP
#define UNIPD_HARNESS_GENERATORS_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "unipd/alm.hpp"
#include "unipd/baselines.hpp"

namespace unipd::harness {

struct ReferenceSolution {
  Vec x_star;
  std::optional<Vec> y_star;
  double phi_star = 0.0;
};

/// Selects the Pinf / ObjGap formulas.
enum class Family { kGeneric, kLP, kBP, kL1L1 };

std::string family_name(Family f);
Family parse_family(const std::string& name);

struct Instance {
  explicit Instance(ConicProblem p) : problem(std::move(p)) {}

  ConicProblem problem;
  std::optional<ReferenceSolution> ref;
  Family family = Family::kGeneric;
  /// Length of the original x inside a lifted variable (L1L1: x of (x, r)).
  long n_x = 0;
  /// LP: the first m_eq rows are the equalities C x = d.
  long m_eq = 0;
  /// Optional column partition for block methods.
  std::vector<long> partition;
};

enum class Ensemble { kGaussian, kPartialDct };

std::string ensemble_name(Ensemble e);
Ensemble parse_ensemble(const std::string& name);

/// Returns UNIPD_SEED when set, otherwise `fallback`.
std::uint64_t resolve_seed(std::uint64_t fallback);

/// Basis pursuit min ||x||_1 s.t. A x = b with a k-sparse planted x*.
/// Gaussian: standard normal A and nonzeros. Partial DCT: m random rows of the
/// orthonormal DCT-II, nonzeros eta1 * 10^(d * eta2 / 20) with eta1 = +-1,
/// eta2 ~ U[0, 1] and d = dynamic_range_db. Reference y* is not planted.
Instance gen_bp(long n, long m, long k, Ensemble ensemble, double dynamic_range_db, std::uint64_t seed);

/// Lift of min zeta ||x||_1 + ||A x - b||_1 over (x, r) with A x - b + r = 0.
Instance gen_l1l1(const Instance& bp, double zeta);

/// Random LP  min r'x  s.t.  C x = d, A x <= b, l <= x <= u  with a planted
/// primal-dual certificate. Rows are stacked [C; A], K = zero(m2) x nonpos(m1).
Instance gen_lp(long n, long m1, long m2, std::uint64_t seed);

/// Dual objective of the planted LP certificate; equals r'x* by construction.
double lp_dual_objective(const Instance& lp);

/// Strongly convex QP  min 0.5 x'Qx + q'x  s.t.  A x = b  with planted (x*, y*).
Instance gen_qp(long n, long m, std::uint64_t seed);

/// Composite  min f(x) + zeta ||x||_1  s.t.  A x = b  with planted (x*, y*):
/// f linear (L_f = 0) or a rank-deficient PSD quadratic.
Instance gen_composite(long n, long m, long k, bool quadratic, std::uint64_t seed);

struct Counterexample {
  baselines::BlockProblem blocks;
  Instance conic;
};

/// Multi-block ADMM non-convergence examples (which = 1 or 2), rho1 = 1.
Counterexample gen_counterexample(int which);

}  // namespace unipd::harness

#endif  // UNIPD_HARNESS_GENERATORS_HPP
