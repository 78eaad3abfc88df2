#include "unipd/harness/metrics.hpp"

#include <cmath>
#include <limits>

namespace unipd::harness {

namespace {

double safe_div(double num, double den) { return den > 0.0 ? num / den : num; }

}  // namespace

double obj_gap(const Instance& inst, const Vec& x) {
  if (!inst.ref) throw ConfigurationError("obj_gap needs a reference solution");
  const double phi_star = inst.ref->phi_star;
  double phi = 0.0;
  if (inst.family == Family::kLP) {
    phi = inst.problem.f.value(x);  // r'x; the box enters only through Pinf
    const double den = std::abs(phi_star);
    return std::abs(phi - phi_star) / (den > 1e-12 ? den : 1.0);
  }
  phi = alm::eval_phi(inst.problem, x);
  return std::abs(phi - phi_star) / std::max(std::abs(phi_star), 1.0);
}

double pinf(const Instance& inst, const Vec& x) {
  const ConicProblem& p = inst.problem;
  const Vec res = p.A.apply(x) - p.b;
  if (inst.family == Family::kLP) {
    const long me = inst.m_eq;
    const long mi = p.m() - me;
    const double eq = safe_div(res.head(me).norm(), p.b.head(me).norm());
    const double ineq = safe_div(res.tail(mi).cwiseMax(0.0).norm(), p.b.tail(mi).norm());
    return eq + ineq;
  }
  return safe_div(cones::cpos(p.K, res).norm(), p.b.norm());
}

double rel_err(const Instance& inst, const Vec& x) {
  if (!inst.ref) throw ConfigurationError("rel_err needs a reference solution");
  const long nx = inst.n_x > 0 ? inst.n_x : x.size();
  const Vec& xs = inst.ref->x_star;
  return (x.head(nx) - xs.head(nx)).norm() / std::max(xs.head(nx).norm(), 1.0);
}

double kkt_residual(const ConicProblem& p, const Vec& x, const Vec& y) {
  const Vec res = p.A.apply(x) - p.b;
  const double feas = cones::cpos(p.K, res).norm();
  const double dual = cones::dist_dual_cone(p.K, y);
  const double comp = std::abs(y.dot(cones::proj_cone(p.K, res)));
  double stat = 0.0;
  try {
    stat = prox::subdiff_dist(p.h, x, p.A.adjoint_apply(y) - p.f.gradient(x));
  } catch (const DomainError&) {
    return std::numeric_limits<double>::infinity();
  }
  return feas + dual + comp + stat;
}

MetricsRow compute_metrics(const Instance& inst, const Vec& x, const std::optional<Vec>& y) {
  MetricsRow row;
  row.pinf = pinf(inst, x);
  if (inst.ref) {
    row.obj_gap = obj_gap(inst, x);
    row.rel_err = rel_err(inst, x);
  }
  if (y) row.kkt_res = kkt_residual(inst.problem, x, *y);
  return row;
}

solver::MetricsHook make_metrics_hook(const Instance& inst, EvalPoint point) {
  return [&inst, point](const solver::IterateState& st, solver::TraceRow& row) {
    const Vec x = (point == EvalPoint::kErgodic && st.k > 0) ? solver::ergodic_point(st).x : st.x;
    const MetricsRow m = compute_metrics(inst, x, st.y);
    row.obj_gap = m.obj_gap;
    row.pinf = m.pinf;
    row.rel_err = m.rel_err;
    row.kkt_res = m.kkt_res;
  };
}

baselines::AdmmMetricsHook make_admm_metrics_hook(const baselines::BlockProblem& bp, const Vec& x_star) {
  const Mat A = bp.assembled_A();
  const Vec b = bp.b;
  const bool split = bp.split;
  return [A, b, split, x_star](const baselines::AdmmState& st, solver::TraceRow& row) {
    double num = (A * st.x - b).norm();
    if (split) num += (st.x - st.u).norm();
    row.pinf = safe_div(num, b.norm());
    row.rel_err = (st.x - x_star).norm() / std::max(x_star.norm(), 1.0);
  };
}

}  // namespace unipd::harness
