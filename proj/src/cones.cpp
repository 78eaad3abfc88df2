#include "unipd/cones.hpp"

#include <algorithm>

#include "unipd/errors.hpp"

namespace unipd::cones {

void Cone::push(ConeKind kind, long dim) {
  if (dim < 0) throw ParameterError("cone dimension must be nonnegative");
  if (dim == 0) return;
  blocks_.push_back({kind, dim_, dim});
  dim_ += dim;
}

Cone Cone::zero(long m) {
  Cone c;
  c.push(ConeKind::kZero, m);
  return c;
}

Cone Cone::nonpos(long m) {
  Cone c;
  c.push(ConeKind::kNonpos, m);
  return c;
}

Cone Cone::nonneg(long m) {
  Cone c;
  c.push(ConeKind::kNonneg, m);
  return c;
}

Cone Cone::product(const std::vector<Cone>& parts) {
  Cone c;
  for (const auto& p : parts) {
    for (const auto& b : p.blocks_) c.push(b.kind, b.dim);
  }
  return c;
}

bool Cone::is_zero() const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [](const ConeBlock& b) { return b.kind == ConeKind::kZero; });
}

bool Cone::operator==(const Cone& other) const {
  if (dim_ != other.dim_ || blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].kind != other.blocks_[i].kind || blocks_[i].dim != other.blocks_[i].dim) return false;
  }
  return true;
}

namespace {

template <typename ZeroFn, typename NonposFn, typename NonnegFn>
Vec blockwise(const Cone& K, const Vec& u, const char* what, ZeroFn on_zero, NonposFn on_nonpos,
              NonnegFn on_nonneg) {
  require_dim(u.size(), K.dim(), what);
  Vec out(u.size());
  for (const auto& b : K.blocks()) {
    auto src = u.segment(b.offset, b.dim);
    auto dst = out.segment(b.offset, b.dim);
    switch (b.kind) {
      case ConeKind::kZero:
        dst = on_zero(src);
        break;
      case ConeKind::kNonpos:
        dst = on_nonpos(src);
        break;
      case ConeKind::kNonneg:
        dst = on_nonneg(src);
        break;
    }
  }
  return out;
}

}  // namespace

Vec proj_cone(const Cone& K, const Vec& u) {
  return blockwise(
      K, u, "proj_cone", [](const auto& s) -> Vec { return Vec::Zero(s.size()); },
      [](const auto& s) -> Vec { return s.cwiseMin(0.0); },
      [](const auto& s) -> Vec { return s.cwiseMax(0.0); });
}

Vec cpos(const Cone& K, const Vec& u) {
  // polar of {0} is everything; polar of an orthant is the opposite orthant
  return blockwise(
      K, u, "cpos", [](const auto& s) -> Vec { return s; },
      [](const auto& s) -> Vec { return s.cwiseMax(0.0); },
      [](const auto& s) -> Vec { return s.cwiseMin(0.0); });
}

Vec cneg(const Cone& K, const Vec& u) { return -proj_cone(K, u); }

Vec proj_dual_cone(const Cone& K, const Vec& u) {
  // orthants are self-dual
  return blockwise(
      K, u, "proj_dual_cone", [](const auto& s) -> Vec { return s; },
      [](const auto& s) -> Vec { return s.cwiseMin(0.0); },
      [](const auto& s) -> Vec { return s.cwiseMax(0.0); });
}

double dist_dual_cone(const Cone& K, const Vec& u) { return (u - proj_dual_cone(K, u)).norm(); }

std::string kind_name(ConeKind kind) {
  switch (kind) {
    case ConeKind::kZero:
      return "zero";
    case ConeKind::kNonpos:
      return "nonpos";
    case ConeKind::kNonneg:
      return "nonneg";
  }
  return "zero";
}

ConeKind parse_kind(const std::string& name) {
  if (name == "zero") return ConeKind::kZero;
  if (name == "nonpos") return ConeKind::kNonpos;
  if (name == "nonneg") return ConeKind::kNonneg;
  throw ConfigurationError("unknown cone kind '" + name + "'");
}

}  // namespace unipd::cones
