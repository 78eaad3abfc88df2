#ifndef UNIPD_PROX_HPP
#define UNIPD_PROX_HPP

#include <limits>
#include <variant>
#include <vector>

#include "unipd/cones.hpp"
#include "unipd/linops.hpp"

namespace unipd::prox {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
/// Absolute slack allowed before an indicator reports +inf.
inline constexpr double kFeasibilityTol = 1e-9;

class ProxFunction;

struct ZeroFn {};

/// zeta * ||x||_1
struct L1Fn {
  double zeta = 1.0;
};

/// Indicator of [lower, upper]; bounds may be infinite.
struct BoxFn {
  Vec lower;
  Vec upper;
};

/// Indicator of the dual cone K*.
struct DualConeFn {
  Cone cone;
};

struct SumPart;

/// sum_i g_i(x[offset_i : offset_i + length_i]); spans tile the input.
struct SeparableSumFn {
  std::vector<SumPart> parts;
};

/// Closed proper convex function with a closed-form prox.
class ProxFunction {
 public:
  using Variant = std::variant<ZeroFn, L1Fn, BoxFn, DualConeFn, SeparableSumFn>;

  ProxFunction() : fn_(ZeroFn{}) {}
  ProxFunction(Variant fn);  // NOLINT: implicit by design of the factories

  static ProxFunction zero() { return ProxFunction(ZeroFn{}); }
  static ProxFunction l1(double zeta);
  static ProxFunction box(Vec lower, Vec upper);
  static ProxFunction dual_cone_indicator(Cone cone);
  static ProxFunction separable_sum(std::vector<SumPart> parts);

  const Variant& fn() const { return fn_; }
  bool is_indicator() const;
  /// Fixed input length, or -1 when the function accepts any length.
  long fixed_dim() const;

 private:
  Variant fn_;
};

struct SumPart {
  ProxFunction fn;
  long offset = 0;
  long length = 0;
};

/// argmin_u { g(u) + ||u - v||^2 / (2 t) }.
Vec prox(const ProxFunction& g, const Vec& v, double t);
/// g(x), +inf for an indicator violated by more than kFeasibilityTol.
double eval(const ProxFunction& g, const Vec& x);
/// dist(target, dg(x)). Throws DomainError when x is outside dom g.
double subdiff_dist(const ProxFunction& g, const Vec& x, const Vec& target);

}  // namespace unipd::prox

namespace unipd {
using prox::ProxFunction;
}

#endif  // UNIPD_PROX_HPP
