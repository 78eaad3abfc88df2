#ifndef UNIPD_HARNESS_METRICS_HPP
#define UNIPD_HARNESS_METRICS_HPP

#include <optional>

#include "unipd/baselines.hpp"
#include "unipd/harness/generators.hpp"
#include "unipd/solver.hpp"

namespace unipd::harness {

struct MetricsRow {
  std::optional<double> obj_gap;
  std::optional<double> pinf;
  std::optional<double> rel_err;
  std::optional<double> kkt_res;
};

/// Relative objective gap; LP divides by |r'x*|, otherwise by max(|Phi*|, 1).
double obj_gap(const Instance& inst, const Vec& x);

/// Primal infeasibility per family. LP: ||[Ax - b]_+|| / ||b|| + ||Cx - d|| / ||d||;
/// L1L1: ||Ax - b + r|| / ||b||; otherwise ||cpos(Ax - b)|| / ||b||.
/// A zero normalizer falls back to the absolute residual.
double pinf(const Instance& inst, const Vec& x);

/// ||x - x*|| / max(||x*||, 1) over the first n_x entries.
double rel_err(const Instance& inst, const Vec& x);

/// ||cpos(Ax - b)|| + dist(y, K*) + |<y, P_K(Ax - b)>| + dist(A'y - grad f(x), dh(x)).
/// +inf when x lies outside dom h.
double kkt_residual(const ConicProblem& p, const Vec& x, const Vec& y);

MetricsRow compute_metrics(const Instance& inst, const Vec& x, const std::optional<Vec>& y);

/// Which primal point a trace row is evaluated at.
enum class EvalPoint { kLast, kErgodic };

/// Fills obj_gap, pinf, rel_err (reference-based ones only when a reference
/// exists) and kkt_res. kErgodic uses x_bar (x^0 at k = 0) with the current y.
solver::MetricsHook make_metrics_hook(const Instance& inst, EvalPoint point);

/// Multi-block split metrics: rel_err and (||Ax - b|| + ||x - u||) / ||b||.
baselines::AdmmMetricsHook make_admm_metrics_hook(const baselines::BlockProblem& bp, const Vec& x_star);

}  // namespace unipd::harness

#endif  // UNIPD_HARNESS_METRICS_HPP
