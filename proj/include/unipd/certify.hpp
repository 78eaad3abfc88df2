#ifndef UNIPD_CERTIFY_HPP
#define UNIPD_CERTIFY_HPP

#include <optional>
#include <string>

#include "unipd/linops.hpp"
#include "unipd/solver.hpp"

namespace unipd::solver {

/// Affine: K = {0} (or rho = 0 with s = indicator of K*). Conic: rho > 0, general K.
enum class Regime { kAffine, kConic };

std::string regime_name(Regime regime);
Regime parse_regime(const std::string& name);

/// Piecewise t(a, b) = b + (a - b)^2 / (2a - b) for a > b, else b.
double t_func(double a, double b);

/// Weight coefficients entering the conic step-size matrix.
double gamma_w(const SolverParams& params);
double gamma_y(const SolverParams& params);

/// Smallest admissible potential weight c for the regime.
/// Conic regime with rho = 0 throws ParameterError.
double weight_c(const SolverParams& params, double L_f, double normA, Regime regime);

/// (2m + n) square matrix acting on [Ax^{k+1} - b; x^{k+1} - x^k; y^{k+1} - y^k].
Mat assemble_pc(const SolverParams& params, double L_f, double normA, const Mat& A, double c);
/// (n + m) square matrix acting on [x^{k+1} - x^k; y^{k+1} - y^k].
Mat assemble_pc_prime(const SolverParams& params, double L_f, const Mat& A, double c);

struct CertReport {
  Regime regime = Regime::kAffine;
  double c = 0.0;
  /// Scalar sufficient condition for a named preset.
  bool scalar_available = false;
  bool scalar_ok = false;
  std::string scalar_detail;
  /// Exact eigenvalue test, only with a dense A and n + 2m <= 2000.
  bool psd_checked = false;
  double min_eig = 0.0;
  bool psd_ok = false;
  /// Conic only: smallest eigenvalue of P'_c + c Lambda^{-1}.
  std::optional<double> min_eig_shifted;
  bool certified = false;
  std::string message;
};

inline constexpr double kPsdTolerance = -1e-10;
inline constexpr long kPsdMaxSize = 2000;

/// Scalar per-preset conditions plus, when `A_dense` is given, the exact PSD
/// check of P_c (affine) or P'_c (conic) at c = weight_c.
CertReport certify_stepsizes(const SolverParams& params, double L_f, double normA, Regime regime,
                             const Mat* A_dense = nullptr);

/// True iff the preset's scalar sufficient condition holds.
bool scalar_condition(const SolverParams& params, double L_f, double normA, Regime regime);

struct AutoStepOptions {
  /// Penalty; when absent, chosen from L_f and ||A||.
  std::optional<double> rho;
  /// sigma = ratio * tau along the generic recipe.
  double ratio = 1.0;
  /// Fraction of the boundary step used by the generic recipe.
  double slack = 0.9;
};

/// Certified (tau, sigma, rho) for a preset. Uses the strongly-convex recipe
/// (SOGDA: rho = sigma = L_f / (4||A||^2), tau = 1 / (8 L_f); LALM: rho = sigma
/// = L_f / (2||A||^2), tau = 1 / (2 L_f)) when L_f > 0, rho is not pinned and
/// the result certifies; otherwise scales (tau, ratio * tau) to `slack` times
/// the boundary of the scalar condition. Throws ParameterError when the
/// condition set is empty for the requested rho.
SolverParams auto_stepsizes(Preset preset, double L_f, double normA, Regime regime,
                            const AutoStepOptions& opts = {});

}  // namespace unipd::solver

#endif  // UNIPD_CERTIFY_HPP
