#ifndef UNIPD_SOLVER_HPP
#define UNIPD_SOLVER_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "unipd/alm.hpp"
#include "unipd/errors.hpp"

namespace unipd::solver {

/// Named (mu, alpha, beta) points of the unified update.
enum class Preset { kSOGDA, kPDHG, kCP, kGDA, kOGDA, kLALM, kCustom };

std::string preset_name(Preset preset);
/// Accepts "sogda", "pdhg", "cp", "gda", "ogda", "lalm", "custom" (any case).
Preset parse_preset(const std::string& name);

/// How the Gauss-Seidel part of the dual step is realized.
enum class DualUpdateMode {
  /// Exact implicit update through its closed form where one exists.
  kImplicit,
  /// Use grad_y(x^{k+1}, y^k) in place of grad_y(x^{k+1}, y^{k+1}).
  kExplicit,
};

struct SolverParams {
  double tau = 1.0;    // primal step
  double sigma = 1.0;  // dual step
  double rho = 0.0;    // penalty
  double alpha = 0.0;  // primal gradient extrapolation, in [0, 1]
  double beta = 0.0;   // dual gradient extrapolation
  double mu = 0.0;     // 1 = Jacobian, 0 = Gauss-Seidel dual gradient
  Preset preset = Preset::kCustom;
  DualUpdateMode dual_mode = DualUpdateMode::kImplicit;

  /// Pins (mu, alpha, beta) from the preset; LALM requires rho > 0.
  static SolverParams from_preset(Preset preset, double tau, double sigma, double rho);
  /// Throws ParameterError on tau, sigma <= 0, rho < 0, alpha or mu outside
  /// [0, 1], or a preset tag that disagrees with (mu, alpha, beta).
  void validate() const;
};

struct IterateState {
  Vec x;
  Vec y;
  Vec x_prev;   // x^{k-1}
  Vec y_prev;   // y^{k-1}
  Vec gx_prev;  // grad_x Psi(z^{k-1})
  Vec gy_prev;  // grad_y Psi(z^{k-1})
  Vec ax;       // A x^k
  long k = 0;
  Vec ergodic_x_sum;  // sum_{j=1..k} x^j
  Vec ergodic_r_sum;  // sum_{j=1..k} r^j
};

/// x^{-1} = x^0, y^{-1} = y^0 = 0; previous gradients evaluated at z^0.
IterateState init_state(const ConicProblem& p, const SolverParams& params, const Vec& x0);

/// One application of the unified update.
IterateState step(const ConicProblem& p, const SolverParams& params, const IterateState& st);

/// Closed form of y = omega - kappa * cneg(nu - y) (s = 0, rho > 0).
Vec dual_update_closed_form(const Cone& K, double rho, const Vec& omega, double kappa, const Vec& nu);

/// Componentwise solution of y = P_{K*}(omega - kappa * cneg(nu - y)) for
/// K = nonpositive orthant.
Vec dual_update_orthant_indicator(const Vec& omega, double kappa, const Vec& nu);

/// The same fixed point for any product of zero cones and orthants.
Vec dual_update_indicator(const Cone& K, const Vec& omega, double kappa, const Vec& nu);

/// (x_bar, r_bar): running averages over iterations 1..k.
struct ErgodicPoint {
  Vec x;
  Vec r;
};
ErgodicPoint ergodic_point(const IterateState& st);

struct TraceRow {
  long iter = 0;
  std::optional<double> obj_gap;
  std::optional<double> pinf;
  std::optional<double> rel_err;
  std::optional<double> kkt_res;
  std::optional<double> potential;
  double wall_ms = 0.0;
};

using Trace = std::vector<TraceRow>;

/// Fills metric columns of a row for the given state.
using MetricsHook = std::function<void(const IterateState&, TraceRow&)>;

struct StoppingRule {
  long max_iter = 1000;
  /// Emit a row every this many iterations (plus iteration 0 and the last).
  long record_interval = 10;
  /// Optional early exit, evaluated on each recorded row.
  std::function<bool(const TraceRow&)> converged;
};

struct DiagnosticsConfig {
  /// Reference point for the potential; both parts required when tracking.
  std::optional<Vec> ref_x;
  std::optional<Vec> ref_y;
  bool track_potential = false;
  /// Potential weight c; defaults to the smallest admissible weight.
  std::optional<double> potential_c;
  MetricsHook metrics;
};

struct SolveResult {
  IterateState state;
  Trace trace;
  long iterations = 0;
  bool converged = false;
};

/// Thrown on non-finite iterates or ||z^k|| > 1e12 (1 + ||z^0||).
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, IterateState last_finite, Trace partial)
      : Error(what), last_(std::move(last_finite)), trace_(std::move(partial)) {}
  const IterateState& last_finite_state() const { return last_; }
  const Trace& partial_trace() const { return trace_; }

 private:
  IterateState last_;
  Trace trace_;
};

struct SolveOptions {
  StoppingRule stopping;
  DiagnosticsConfig diagnostics;
  /// Run even when the step sizes are not certified.
  bool force = false;
};

/// Loop around `step`. Without `force`, params must pass the scalar
/// certification for the problem's regime (affine when K = {0} or rho = 0).
SolveResult solve(const ConicProblem& p, const SolverParams& params, const Vec& x0, const SolveOptions& opts);

}  // namespace unipd::solver

#endif  // UNIPD_SOLVER_HPP
