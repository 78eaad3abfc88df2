#include "unipd/prox.hpp"

#include <cmath>
#include <string>

#include "unipd/errors.hpp"

namespace unipd::prox {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_sum_spans(const std::vector<SumPart>& parts) {
  long expected = 0;
  for (const auto& p : parts) {
    if (p.offset != expected || p.length < 0) {
      throw ConfigurationError("separable_sum: spans must tile the input in order");
    }
    const long fd = p.fn.fixed_dim();
    if (fd >= 0 && fd != p.length) throw DimensionError("separable_sum: part length mismatch");
    expected += p.length;
  }
}

long sum_length(const SeparableSumFn& s) {
  return s.parts.empty() ? 0 : s.parts.back().offset + s.parts.back().length;
}

void check_input(const ProxFunction& g, long len, const char* what) {
  const long fd = g.fixed_dim();
  if (fd >= 0) require_dim(len, fd, what);
}

}  // namespace

ProxFunction::ProxFunction(Variant fn) : fn_(std::move(fn)) {}

ProxFunction ProxFunction::l1(double zeta) {
  if (!(zeta >= 0.0)) throw ParameterError("l1: weight must be nonnegative");
  return ProxFunction(L1Fn{zeta});
}

ProxFunction ProxFunction::box(Vec lower, Vec upper) {
  if (lower.size() != upper.size()) throw DimensionError("box: bound lengths differ");
  if ((lower.array() > upper.array()).any()) throw ParameterError("box: lower > upper");
  return ProxFunction(BoxFn{std::move(lower), std::move(upper)});
}

ProxFunction ProxFunction::dual_cone_indicator(Cone cone) { return ProxFunction(DualConeFn{std::move(cone)}); }

ProxFunction ProxFunction::separable_sum(std::vector<SumPart> parts) {
  check_sum_spans(parts);
  return ProxFunction(SeparableSumFn{std::move(parts)});
}

bool ProxFunction::is_indicator() const {
  return std::visit(overloaded{
                        [](const ZeroFn&) { return false; },
                        [](const L1Fn&) { return false; },
                        [](const BoxFn&) { return true; },
                        [](const DualConeFn&) { return true; },
                        [](const SeparableSumFn& s) {
                          for (const auto& p : s.parts) {
                            if (!p.fn.is_indicator()) return false;
                          }
                          return true;
                        },
                    },
                    fn_);
}

long ProxFunction::fixed_dim() const {
  return std::visit(overloaded{
                        [](const ZeroFn&) -> long { return -1; },
                        [](const L1Fn&) -> long { return -1; },
                        [](const BoxFn& b) -> long { return b.lower.size(); },
                        [](const DualConeFn& d) -> long { return d.cone.dim(); },
                        [](const SeparableSumFn& s) -> long { return sum_length(s); },
                    },
                    fn_);
}

Vec prox(const ProxFunction& g, const Vec& v, double t) {
  if (!(t > 0.0)) throw ParameterError("prox: step t must be positive, got " + std::to_string(t));
  check_input(g, v.size(), "prox");
  return std::visit(overloaded{
                        [&](const ZeroFn&) -> Vec { return v; },
                        [&](const L1Fn& f) -> Vec {
                          const double thr = t * f.zeta;
                          Vec out(v.size());
                          for (long i = 0; i < v.size(); ++i) {
                            const double a = std::abs(v[i]) - thr;
                            out[i] = a > 0.0 ? std::copysign(a, v[i]) : 0.0;
                          }
                          return out;
                        },
                        [&](const BoxFn& b) -> Vec { return v.cwiseMax(b.lower).cwiseMin(b.upper); },
                        [&](const DualConeFn& d) -> Vec { return cones::proj_dual_cone(d.cone, v); },
                        [&](const SeparableSumFn& s) -> Vec {
                          Vec out(v.size());
                          for (const auto& p : s.parts) {
                            out.segment(p.offset, p.length) = prox(p.fn, v.segment(p.offset, p.length), t);
                          }
                          return out;
                        },
                    },
                    g.fn());
}

double eval(const ProxFunction& g, const Vec& x) {
  check_input(g, x.size(), "eval");
  return std::visit(overloaded{
                        [&](const ZeroFn&) { return 0.0; },
                        [&](const L1Fn& f) { return f.zeta * x.lpNorm<1>(); },
                        [&](const BoxFn& b) {
                          for (long i = 0; i < x.size(); ++i) {
                            if (x[i] < b.lower[i] - kFeasibilityTol || x[i] > b.upper[i] + kFeasibilityTol) {
                              return kInfinity;
                            }
                          }
                          return 0.0;
                        },
                        [&](const DualConeFn& d) {
                          const Vec p = cones::proj_dual_cone(d.cone, x);
                          return (x - p).lpNorm<Eigen::Infinity>() > kFeasibilityTol ? kInfinity : 0.0;
                        },
                        [&](const SeparableSumFn& s) {
                          double acc = 0.0;
                          for (const auto& p : s.parts) acc += eval(p.fn, x.segment(p.offset, p.length));
                          return acc;
                        },
                    },
                    g.fn());
}

namespace {

// Squared distance from target to dg(x); assumes x was checked to be in dom g.
double subdiff_dist_sq(const ProxFunction& g, const Vec& x, const Vec& target) {
  return std::visit(
      overloaded{
          [&](const ZeroFn&) { return target.squaredNorm(); },
          [&](const L1Fn& f) {
            double acc = 0.0;
            for (long i = 0; i < x.size(); ++i) {
              double d;
              if (x[i] == 0.0) {
                d = std::max(std::abs(target[i]) - f.zeta, 0.0);
              } else {
                d = target[i] - std::copysign(f.zeta, x[i]);
              }
              acc += d * d;
            }
            return acc;
          },
          [&](const BoxFn& b) {
            // normal cone of the box: (-inf,0] at the lower bound, [0,inf) at the upper
            double acc = 0.0;
            for (long i = 0; i < x.size(); ++i) {
              const bool at_lo = x[i] <= b.lower[i] + kFeasibilityTol;
              const bool at_hi = x[i] >= b.upper[i] - kFeasibilityTol;
              double d;
              if (at_lo && at_hi) {
                d = 0.0;
              } else if (at_lo) {
                d = std::max(target[i], 0.0);
              } else if (at_hi) {
                d = std::min(target[i], 0.0);
              } else {
                d = target[i];
              }
              acc += d * d;
            }
            return acc;
          },
          [&](const DualConeFn& dc) {
            double acc = 0.0;
            for (const auto& blk : dc.cone.blocks()) {
              for (long i = blk.offset; i < blk.offset + blk.dim; ++i) {
                const bool boundary = std::abs(x[i]) <= kFeasibilityTol;
                double d = target[i];
                switch (blk.kind) {
                  case cones::ConeKind::kZero:
                    break;  // K* is the whole space
                  case cones::ConeKind::kNonpos:
                    if (boundary) d = std::min(target[i], 0.0);
                    break;
                  case cones::ConeKind::kNonneg:
                    if (boundary) d = std::max(target[i], 0.0);
                    break;
                }
                acc += d * d;
              }
            }
            return acc;
          },
          [&](const SeparableSumFn& s) {
            double acc = 0.0;
            for (const auto& p : s.parts) {
              acc += subdiff_dist_sq(p.fn, x.segment(p.offset, p.length), target.segment(p.offset, p.length));
            }
            return acc;
          },
      },
      g.fn());
}

}  // namespace

double subdiff_dist(const ProxFunction& g, const Vec& x, const Vec& target) {
  check_input(g, x.size(), "subdiff_dist");
  require_dim(target.size(), x.size(), "subdiff_dist target");
  if (std::isinf(eval(g, x))) throw DomainError("subdiff_dist: x is outside the domain");
  return std::sqrt(subdiff_dist_sq(g, x, target));
}

}  // namespace unipd::prox
