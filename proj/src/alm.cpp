#include "unipd/alm.hpp"

#include <cmath>

#include "unipd/errors.hpp"

namespace unipd::alm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

SmoothTerm SmoothTerm::zero(long n) { return SmoothTerm(ZeroSmooth{n}, 0.0); }

SmoothTerm SmoothTerm::linear(Vec r) { return SmoothTerm(LinearSmooth{std::move(r)}, 0.0); }

SmoothTerm SmoothTerm::quadratic(Mat Q, Vec q) {
  if (Q.rows() != Q.cols() || Q.rows() != q.size()) throw DimensionError("quadratic: Q must be n x n with q of length n");
  const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ParameterError("quadratic: Q must be symmetric");
  }
  double lip = 0.0;
  if (Q.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(Q, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10 * scale) throw ParameterError("quadratic: Q must be PSD");
    lip = std::max(0.0, eig.eigenvalues().maxCoeff());
  }
  return SmoothTerm(QuadraticSmooth{std::move(Q), std::move(q)}, lip);
}

long SmoothTerm::dim() const {
  return std::visit(overloaded{
                        [](const ZeroSmooth& z) { return z.n; },
                        [](const LinearSmooth& l) { return static_cast<long>(l.r.size()); },
                        [](const QuadraticSmooth& q) { return static_cast<long>(q.q.size()); },
                    },
                    term_);
}

double SmoothTerm::value(const Vec& x) const {
  require_dim(x.size(), dim(), "SmoothTerm::value");
  return std::visit(overloaded{
                        [](const ZeroSmooth&) { return 0.0; },
                        [&](const LinearSmooth& l) { return l.r.dot(x); },
                        [&](const QuadraticSmooth& q) { return 0.5 * x.dot(q.Q * x) + q.q.dot(x); },
                    },
                    term_);
}

Vec SmoothTerm::gradient(const Vec& x) const {
  require_dim(x.size(), dim(), "SmoothTerm::gradient");
  return std::visit(overloaded{
                        [&](const ZeroSmooth&) -> Vec { return Vec::Zero(x.size()); },
                        [&](const LinearSmooth& l) -> Vec { return l.r; },
                        [&](const QuadraticSmooth& q) -> Vec { return q.Q * x + q.q; },
                    },
                    term_);
}

void ConicProblem::validate() const {
  require_dim(f.dim(), n(), "ConicProblem: f dimension");
  const long hd = h.fixed_dim();
  if (hd >= 0) require_dim(hd, n(), "ConicProblem: h dimension");
  require_dim(b.size(), m(), "ConicProblem: b");
  require_dim(K.dim(), m(), "ConicProblem: cone dimension");
}

void ConicProblem::validate_for_rho(double rho) const {
  if (!(rho >= 0.0)) throw ParameterError("rho must be nonnegative");
  // for K = {0}, K* is the whole space and s = 0 coincides with its indicator
  if (rho == 0.0 && s == DualRegularizer::kZero && !K.is_zero()) {
    throw ConfigurationError("rho = 0 with a nontrivial cone requires s = indicator of K*");
  }
}

DualRegularizer ConicProblem::effective_s(double rho) const {
  return rho == 0.0 ? DualRegularizer::kDualConeIndicator : s;
}

SaddleState SaddleState::make(const ConicProblem& p, Vec x, Vec y, double rho) {
  Vec ax = p.A.apply(x);
  return with_ax(p, std::move(x), std::move(y), rho, std::move(ax));
}

SaddleState SaddleState::with_ax(const ConicProblem& p, Vec x, Vec y, double rho, Vec ax) {
  require_dim(x.size(), p.n(), "SaddleState x");
  require_dim(y.size(), p.m(), "SaddleState y");
  require_dim(ax.size(), p.m(), "SaddleState Ax");
  SaddleState st;
  st.x = std::move(x);
  st.y = std::move(y);
  st.rho = rho;
  st.ax = std::move(ax);
  if (rho > 0.0) st.w = st.ax - p.b - st.y / rho;
  return st;
}

Vec grad_x(const ConicProblem& p, const SaddleState& st) {
  Vec g = p.f.gradient(st.x);
  if (st.rho > 0.0) {
    g += st.rho * p.A.adjoint_apply(cones::cpos(p.K, st.w));
  } else {
    g -= p.A.adjoint_apply(st.y);
  }
  return g;
}

Vec grad_y(const ConicProblem& p, const SaddleState& st) {
  if (st.rho > 0.0) return -st.y / st.rho - cones::cpos(p.K, st.w);
  return -(st.ax - p.b);
}

Vec grad_y_via_cneg(const ConicProblem& p, const SaddleState& st) {
  if (st.rho > 0.0) return -(st.ax - p.b) - cones::cneg(p.K, st.w);
  return -(st.ax - p.b);
}

Vec residual_r(const ConicProblem& p, const SaddleState& st) { return -grad_y(p, st); }

Vec operator_F(const ConicProblem& p, const SaddleState& st) {
  Vec out(p.n() + p.m());
  out << grad_x(p, st), -grad_y(p, st);
  return out;
}

double eval_psi(const ConicProblem& p, const SaddleState& st) {
  const double fx = p.f.value(st.x);
  if (st.rho > 0.0) {
    return fx + 0.5 * st.rho * cones::cpos(p.K, st.w).squaredNorm() - st.y.squaredNorm() / (2.0 * st.rho);
  }
  return fx - st.y.dot(st.ax - p.b);
}

double eval_L_rho(const ConicProblem& p, const SaddleState& st) {
  const double hx = prox::eval(p.h, st.x);
  if (std::isinf(hx)) return hx;
  return hx + eval_psi(p, st);
}

double eval_phi(const ConicProblem& p, const Vec& x) {
  const double hx = prox::eval(p.h, x);
  if (std::isinf(hx)) return hx;
  return p.f.value(x) + hx;
}

double lipschitz_f_rho(const ConicProblem& p, double rho, double norm_tol) {
  if (!(rho >= 0.0)) throw ParameterError("lipschitz_f_rho: rho must be nonnegative");
  if (rho == 0.0) return p.f.lipschitz();
  const double na = p.A.op_norm(norm_tol);
  return p.f.lipschitz() + rho * na * na;
}

}  // namespace unipd::alm
