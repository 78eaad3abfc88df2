#ifndef UNIPD_ALM_HPP
#define UNIPD_ALM_HPP

#include <variant>

#include "unipd/cones.hpp"
#include "unipd/linops.hpp"
#include "unipd/prox.hpp"

namespace unipd::alm {

struct ZeroSmooth {
  long n = 0;
};

/// r^T x
struct LinearSmooth {
  Vec r;
};

/// 0.5 x^T Q x + q^T x with Q symmetric PSD.
struct QuadraticSmooth {
  Mat Q;
  Vec q;
};

/// Differentiable convex f with an L_f-Lipschitz gradient.
class SmoothTerm {
 public:
  using Variant = std::variant<ZeroSmooth, LinearSmooth, QuadraticSmooth>;

  static SmoothTerm zero(long n);
  static SmoothTerm linear(Vec r);
  /// L_f is the largest eigenvalue of Q. Throws ParameterError when Q is not
  /// symmetric PSD (tolerance 1e-10 relative).
  static SmoothTerm quadratic(Mat Q, Vec q);

  long dim() const;
  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  double lipschitz() const { return lipschitz_; }
  const Variant& term() const { return term_; }

 private:
  SmoothTerm(Variant term, double lipschitz) : term_(std::move(term)), lipschitz_(lipschitz) {}
  Variant term_;
  double lipschitz_ = 0.0;
};

/// Which s the saddle model uses: s = 0, or s = indicator of K*.
enum class DualRegularizer { kZero, kDualConeIndicator };

/// min_x f(x) + h(x)  s.t.  A x - b in K.
struct ConicProblem {
  SmoothTerm f;
  ProxFunction h;
  LinearOperator A;
  Vec b;
  Cone K;
  DualRegularizer s = DualRegularizer::kZero;

  long n() const { return A.cols(); }
  long m() const { return A.rows(); }
  /// Throws DimensionError on inconsistent pieces.
  void validate() const;
  /// Throws ConfigurationError when (s, rho, K) is not an admissible saddle model.
  void validate_for_rho(double rho) const;
  /// s actually used at this rho: rho = 0 always constrains y to K*.
  DualRegularizer effective_s(double rho) const;
};

/// (x, y, rho) with the cached products Ax and w = Ax - b - y/rho.
struct SaddleState {
  Vec x;
  Vec y;
  double rho = 0.0;
  Vec ax;
  Vec w;  // empty when rho == 0

  static SaddleState make(const ConicProblem& p, Vec x, Vec y, double rho);
  /// Reuses a known A x.
  static SaddleState with_ax(const ConicProblem& p, Vec x, Vec y, double rho, Vec ax);
};

/// grad_x Psi: rho > 0 gives grad f + rho A^T cpos(w); rho = 0 gives grad f - A^T y.
Vec grad_x(const ConicProblem& p, const SaddleState& st);
/// grad_y Psi: rho > 0 gives -y/rho - cpos(w); rho = 0 gives -(Ax - b).
Vec grad_y(const ConicProblem& p, const SaddleState& st);
/// The second closed form -(Ax - b) - cneg(w), equal to grad_y by Moreau.
Vec grad_y_via_cneg(const ConicProblem& p, const SaddleState& st);
/// r = -grad_y, the residual surrogate of Ax - b.
Vec residual_r(const ConicProblem& p, const SaddleState& st);
/// F(z) = [grad_x Psi; -grad_y Psi].
Vec operator_F(const ConicProblem& p, const SaddleState& st);

/// L_rho(x, y) = h(x) + Psi(x, y). Returns +inf when h(x) is infinite.
double eval_L_rho(const ConicProblem& p, const SaddleState& st);
/// Psi(x, y) alone.
double eval_psi(const ConicProblem& p, const SaddleState& st);
/// Phi(x) = f(x) + h(x).
double eval_phi(const ConicProblem& p, const Vec& x);
/// L_f + rho ||A||^2.
double lipschitz_f_rho(const ConicProblem& p, double rho, double norm_tol = 1e-9);

}  // namespace unipd::alm

namespace unipd {
using alm::ConicProblem;
using alm::SmoothTerm;
}  // namespace unipd

#endif  // UNIPD_ALM_HPP
