#ifndef UNIPD_BASELINES_HPP
#define UNIPD_BASELINES_HPP

#include <functional>
#include <vector>

#include <Eigen/Cholesky>

#include "unipd/linops.hpp"
#include "unipd/solver.hpp"

namespace unipd::baselines {

enum class BlockKind { kZero, kL1, kQuadratic };

/// One column block: objective psi_i(x_i) and its operator A_i (m x n_i).
struct Block {
  BlockKind kind = BlockKind::kZero;
  double zeta = 1.0;  // weight of the l1 objective
  Mat Q;              // quadratic: 0.5 x'Qx + q'x
  Vec q;
  Mat A;

  static Block zero(Mat A);
  static Block l1(Mat A, double zeta = 1.0);
  static Block quadratic(Mat A, Mat Q, Vec q);
  long width() const { return A.cols(); }
};

/// min sum_i psi_i(x_i) s.t. sum_i A_i x_i = b.
/// With `split`, the copies u_i = x_i carry the coupling constraint:
///   L' = sum psi_i(x_i) - y'(sum A_i u_i - b) + rho1/2 ||sum A_i u_i - b||^2
///        - z'(x - u) + rho2/2 ||x - u||^2
struct BlockProblem {
  std::vector<Block> blocks;
  Vec b;
  double rho1 = 1.0;
  double rho2 = 1.0;
  bool split = false;

  long n() const;
  long m() const { return b.size(); }
  std::vector<long> offsets() const;
  Mat assembled_A() const;
  void validate() const;
};

/// Splits a dense A column-wise into `num_blocks` near-equal l1 blocks.
BlockProblem make_l1_blocks(const Mat& A, const Vec& b, int num_blocks, double rho1, double rho2);

struct AdmmState {
  Vec x;
  Vec u;  // empty unless split
  Vec y;
  Vec z;  // empty unless split
  long k = 0;
};

AdmmState admm_init(const BlockProblem& bp, const Vec& x0);

/// Value of the (split or plain) augmented Lagrangian at a state.
double eval_lagrangian(const BlockProblem& bp, const AdmmState& st);

/// Gauss-Seidel ADMM with cached block factorizations.
class AdmmSolver {
 public:
  explicit AdmmSolver(BlockProblem bp);

  const BlockProblem& problem() const { return bp_; }

  /// Exact minimization of the Lagrangian over x_i, others fixed.
  void update_x_block(AdmmState& st, std::size_t i) const;
  /// Exact minimization over u_i (split only).
  void update_u_block(AdmmState& st, std::size_t i) const;
  /// Multiplier ascent: y -= rho1 (coupling residual), z -= rho2 (x - u).
  void update_multipliers(AdmmState& st) const;

  /// Full sweep x_1..x_N, u_1..u_N, y, z.
  AdmmState step(const AdmmState& st) const;

 private:
  struct Factor {
    bool woodbury = false;  // solve via the m x m system rho2/rho1 I + A_i A_i'
    Eigen::LLT<Mat> llt;
  };
  Vec coupling_sum(const AdmmState& st) const;  // sum_i A_i v_i with v = u (split) or x
  Vec solve_block(std::size_t i, const Vec& rhs) const;

  BlockProblem bp_;
  std::vector<long> offsets_;
  std::vector<Factor> factors_;
};

AdmmState admm_step(const BlockProblem& bp, const AdmmState& st);

using AdmmMetricsHook = std::function<void(const AdmmState&, solver::TraceRow&)>;

struct AdmmResult {
  AdmmState state;
  solver::Trace trace;
  long iterations = 0;
  bool converged = false;
};

/// Thrown under the same rule as the primal-dual solver.
class AdmmDivergenceError : public Error {
 public:
  AdmmDivergenceError(const std::string& what, AdmmState last_finite, solver::Trace partial)
      : Error(what), last_(std::move(last_finite)), trace_(std::move(partial)) {}
  const AdmmState& last_finite_state() const { return last_; }
  const solver::Trace& partial_trace() const { return trace_; }

 private:
  AdmmState last_;
  solver::Trace trace_;
};

/// Stops at max_iter, on `stop.converged`, or when both the primal residual
/// and rho1 ||A(v^k - v^{k-1})|| fall below tol (tol = 0 disables).
AdmmResult admm_solve(const BlockProblem& bp, const AdmmState& st0, const solver::StoppingRule& stop,
                      double tol = 0.0, const AdmmMetricsHook& metrics = {});

}  // namespace unipd::baselines

#endif  // UNIPD_BASELINES_HPP
