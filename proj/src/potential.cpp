#include "unipd/potential.hpp"

namespace unipd::solver {

double potential(const ConicProblem& p, const SolverParams& params, const IterateState& st, const Vec& ref_x,
                 const Vec& ref_y, double c) {
  require_dim(ref_x.size(), p.n(), "potential ref_x");
  require_dim(ref_y.size(), p.m(), "potential ref_y");
  const double tau = params.tau;
  const double sigma = params.sigma;

  const auto cur = alm::SaddleState::with_ax(p, st.x, st.y, params.rho, st.ax);
  const Vec gx = alm::grad_x(p, cur);
  const Vec gy = alm::grad_y(p, cur);

  const double dist_ref = (st.x - ref_x).squaredNorm() / tau + (st.y - ref_y).squaredNorm() / sigma;
  const double dist_prev = (st.x - st.x_prev).squaredNorm() / tau + (st.y - st.y_prev).squaredNorm() / sigma;

  // F = [g_x; -g_y], so the y-part of F(z^k) - F(z^{k-1}) is -(gy - gy_prev)
  const double cross = params.alpha * (gx - st.gx_prev).dot(ref_x - st.x) +
                       params.mu * params.beta * (-(gy - st.gy_prev)).dot(ref_y - st.y);
  const double coupling = (params.mu - params.beta) * gy.dot(st.y - ref_y);

  return 0.5 * dist_ref + 0.5 * c * dist_prev + cross + coupling;
}

}  // namespace unipd::solver
