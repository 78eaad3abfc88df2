#ifndef UNIPD_CONES_HPP
#define UNIPD_CONES_HPP

#include <string>
#include <vector>

#include "unipd/linops.hpp"

namespace unipd::cones {

enum class ConeKind { kZero, kNonpos, kNonneg };

struct ConeBlock {
  ConeKind kind;
  long offset;
  long dim;
};

/// Closed convex cone K in R^m built as a product of zero cones and orthants.
///
/// A single cone is a one-block product. Blocks tile [0, m) in order.
class Cone {
 public:
  static Cone zero(long m);
  static Cone nonpos(long m);
  static Cone nonneg(long m);
  /// Product K_1 x ... x K_N; nested products are flattened.
  static Cone product(const std::vector<Cone>& parts);

  long dim() const { return dim_; }
  const std::vector<ConeBlock>& blocks() const { return blocks_; }
  bool is_zero() const;
  bool operator==(const Cone& other) const;

 private:
  void push(ConeKind kind, long dim);
  std::vector<ConeBlock> blocks_;
  long dim_ = 0;
};

/// P_K(u).
Vec proj_cone(const Cone& K, const Vec& u);
/// P_{K°}(u), the projection onto the polar cone.
Vec cpos(const Cone& K, const Vec& u);
/// -P_K(u).
Vec cneg(const Cone& K, const Vec& u);
/// P_{K*}(u) with K* = {y : <y, k> >= 0 for all k in K}.
Vec proj_dual_cone(const Cone& K, const Vec& u);
/// Euclidean distance from u to K*.
double dist_dual_cone(const Cone& K, const Vec& u);

std::string kind_name(ConeKind kind);
ConeKind parse_kind(const std::string& name);

}  // namespace unipd::cones

namespace unipd {
using cones::Cone;
}

#endif  // UNIPD_CONES_HPP
