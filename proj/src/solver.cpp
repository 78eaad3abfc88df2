#include "unipd/solver.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>

#include "unipd/certify.hpp"
#include "unipd/potential.hpp"

namespace unipd::solver {

std::string preset_name(Preset preset) {
  switch (preset) {
    case Preset::kSOGDA:
      return "sogda";
    case Preset::kPDHG:
      return "pdhg";
    case Preset::kCP:
      return "cp";
    case Preset::kGDA:
      return "gda";
    case Preset::kOGDA:
      return "ogda";
    case Preset::kLALM:
      return "lalm";
    case Preset::kCustom:
      return "custom";
  }
  return "custom";
}

Preset parse_preset(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (s == "sogda") return Preset::kSOGDA;
  if (s == "pdhg") return Preset::kPDHG;
  if (s == "cp") return Preset::kCP;
  if (s == "gda") return Preset::kGDA;
  if (s == "ogda") return Preset::kOGDA;
  if (s == "lalm") return Preset::kLALM;
  if (s == "custom") return Preset::kCustom;
  throw ConfigurationError("unknown preset '" + name + "'");
}

namespace {

struct Triple {
  double mu, alpha, beta;
};

std::optional<Triple> preset_triple(Preset preset) {
  switch (preset) {
    case Preset::kSOGDA:
      return Triple{1.0, 0.0, 1.0};
    case Preset::kPDHG:
    case Preset::kLALM:
      return Triple{0.0, 0.0, 0.0};
    case Preset::kCP:
      return Triple{0.0, 0.0, 1.0};
    case Preset::kGDA:
      return Triple{1.0, 0.0, 0.0};
    case Preset::kOGDA:
      return Triple{1.0, 1.0, 1.0};
    case Preset::kCustom:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

SolverParams SolverParams::from_preset(Preset preset, double tau, double sigma, double rho) {
  SolverParams p;
  p.tau = tau;
  p.sigma = sigma;
  p.rho = rho;
  p.preset = preset;
  if (auto t = preset_triple(preset)) {
    p.mu = t->mu;
    p.alpha = t->alpha;
    p.beta = t->beta;
  }
  p.validate();
  return p;
}

void SolverParams::validate() const {
  if (!(tau > 0.0) || !(sigma > 0.0)) throw ParameterError("step sizes tau and sigma must be positive");
  if (!(rho >= 0.0)) throw ParameterError("penalty rho must be nonnegative");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
  if (!(mu >= 0.0 && mu <= 1.0)) throw ParameterError("mu must lie in [0, 1]");
  if (!std::isfinite(beta)) throw ParameterError("beta must be finite");
  if (auto t = preset_triple(preset)) {
    if (t->mu != mu || t->alpha != alpha || t->beta != beta) {
      throw ParameterError("(mu, alpha, beta) disagree with preset " + preset_name(preset));
    }
  }
  if (preset == Preset::kLALM && !(rho > 0.0)) throw ParameterError("lalm requires rho > 0");
}

IterateState init_state(const ConicProblem& p, const SolverParams& params, const Vec& x0) {
  p.validate();
  require_dim(x0.size(), p.n(), "init_state x0");
  const auto cur = alm::SaddleState::make(p, x0, Vec::Zero(p.m()), params.rho);
  IterateState st;
  st.x = x0;
  st.y = Vec::Zero(p.m());
  st.x_prev = st.x;
  st.y_prev = st.y;
  st.gx_prev = alm::grad_x(p, cur);
  st.gy_prev = alm::grad_y(p, cur);
  st.ax = cur.ax;
  st.k = 0;
  st.ergodic_x_sum = Vec::Zero(p.n());
  st.ergodic_r_sum = Vec::Zero(p.m());
  return st;
}

Vec dual_update_closed_form(const Cone& K, double rho, const Vec& omega, double kappa, const Vec& nu) {
  if (!(rho > 0.0)) throw ParameterError("closed-form dual update needs rho > 0");
  if (!(kappa >= 0.0)) throw ParameterError("closed-form dual update needs kappa >= 0");
  require_dim(omega.size(), K.dim(), "dual_update_closed_form omega");
  require_dim(nu.size(), K.dim(), "dual_update_closed_form nu");
  return omega - (kappa / (kappa + 1.0)) * cones::cneg(K, nu - omega);
}

Vec dual_update_orthant_indicator(const Vec& omega, double kappa, const Vec& nu) {
  if (!(kappa >= 0.0)) throw ParameterError("orthant dual update needs kappa >= 0");
  require_dim(nu.size(), omega.size(), "dual_update_orthant_indicator nu");
  Vec y(omega.size());
  for (long i = 0; i < omega.size(); ++i) {
    const double w = omega[i];
    const double v = nu[i];
    if (w > 0.0 && kappa * v >= -w) {
      y[i] = 0.0;
    } else if (w <= 0.0 && v >= w) {
      y[i] = w;
    } else {
      y[i] = (w + kappa * v) / (kappa + 1.0);
    }
  }
  return y;
}

Vec dual_update_indicator(const Cone& K, const Vec& omega, double kappa, const Vec& nu) {
  require_dim(omega.size(), K.dim(), "dual_update_indicator omega");
  require_dim(nu.size(), K.dim(), "dual_update_indicator nu");
  Vec y(omega.size());
  for (const auto& b : K.blocks()) {
    const Vec w = omega.segment(b.offset, b.dim);
    const Vec v = nu.segment(b.offset, b.dim);
    switch (b.kind) {
      case cones::ConeKind::kZero:
        y.segment(b.offset, b.dim) = w;
        break;
      case cones::ConeKind::kNonpos:
        y.segment(b.offset, b.dim) = dual_update_orthant_indicator(w, kappa, v);
        break;
      case cones::ConeKind::kNonneg:
        // y -> -y maps the nonnegative case onto the nonpositive one
        y.segment(b.offset, b.dim) = -dual_update_orthant_indicator(-w, kappa, -v);
        break;
    }
  }
  return y;
}

IterateState step(const ConicProblem& p, const SolverParams& params, const IterateState& st) {
  const double tau = params.tau;
  const double sigma = params.sigma;
  const double rho = params.rho;
  const double alpha = params.alpha;
  const double beta = params.beta;
  const double mu = params.mu;

  const auto cur = alm::SaddleState::with_ax(p, st.x, st.y, rho, st.ax);
  const Vec gx = alm::grad_x(p, cur);
  const Vec gy = alm::grad_y(p, cur);

  Vec x_next = prox::prox(p.h, st.x - tau * ((1.0 + alpha) * gx - alpha * st.gx_prev), tau);
  Vec ax_next = p.A.apply(x_next);
  const Vec res_next = ax_next - p.b;

  const Vec jacobi = sigma * mu * ((1.0 + beta) * gy - beta * st.gy_prev);
  const double gs = sigma * (1.0 - mu);
  const bool indicator = p.effective_s(rho) == alm::DualRegularizer::kDualConeIndicator;

  Vec y_next;
  if (gs == 0.0 || rho == 0.0 || p.K.is_zero() || params.dual_mode == DualUpdateMode::kExplicit) {
    // grad_y at x^{k+1} does not depend on y here, or the explicit variant is requested
    Vec gy_next;
    if (rho == 0.0 || p.K.is_zero()) {
      gy_next = -res_next;
    } else {
      gy_next = alm::grad_y(p, alm::SaddleState::with_ax(p, x_next, st.y, rho, ax_next));
    }
    Vec arg = st.y + jacobi + gs * ((1.0 + beta) * gy_next - beta * gy);
    y_next = indicator ? cones::proj_dual_cone(p.K, arg) : std::move(arg);
  } else {
    const Vec omega = st.y + jacobi - gs * ((1.0 + beta) * res_next + beta * gy);
    const double kappa = gs * (1.0 + beta) / rho;
    const Vec nu = rho * res_next;
    y_next = indicator ? dual_update_indicator(p.K, omega, kappa, nu)
                       : dual_update_closed_form(p.K, rho, omega, kappa, nu);
  }

  const auto next = alm::SaddleState::with_ax(p, x_next, y_next, rho, ax_next);
  const Vec r_next = alm::residual_r(p, next);

  IterateState out;
  out.x_prev = st.x;
  out.y_prev = st.y;
  out.gx_prev = gx;
  out.gy_prev = gy;
  out.x = std::move(x_next);
  out.y = std::move(y_next);
  out.ax = std::move(ax_next);
  out.k = st.k + 1;
  out.ergodic_x_sum = st.ergodic_x_sum + out.x;
  out.ergodic_r_sum = st.ergodic_r_sum + r_next;
  return out;
}

ErgodicPoint ergodic_point(const IterateState& st) {
  if (st.k < 1) throw ParameterError("ergodic_point: no iterations averaged yet");
  const double inv = 1.0 / static_cast<double>(st.k);
  return {st.ergodic_x_sum * inv, st.ergodic_r_sum * inv};
}

namespace {

bool finite_state(const IterateState& st) { return st.x.allFinite() && st.y.allFinite(); }

double z_norm(const IterateState& st) { return std::sqrt(st.x.squaredNorm() + st.y.squaredNorm()); }

}  // namespace

SolveResult solve(const ConicProblem& p, const SolverParams& params, const Vec& x0, const SolveOptions& opts) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();

  p.validate();
  params.validate();
  p.validate_for_rho(params.rho);
  if (params.preset == Preset::kLALM && !p.K.is_zero()) {
    throw ConfigurationError("lalm is defined for K = {0}; use pdhg for conic constraints");
  }

  const Regime regime = (p.K.is_zero() || params.rho == 0.0) ? Regime::kAffine : Regime::kConic;
  const double L_f = p.f.lipschitz();
  const double normA = p.A.op_norm(1e-9);

  if (!opts.force) {
    const Mat* dense = nullptr;
    Mat dense_storage;
    if (params.preset == Preset::kCustom && p.n() + 2 * p.m() <= kPsdMaxSize) {
      dense_storage = p.A.to_dense();
      dense = &dense_storage;
    }
    const CertReport report = certify_stepsizes(params, L_f, normA, regime, dense);
    if (!report.certified) {
      throw ConfigurationError("step sizes not certified (" + report.message + "); pass force to run anyway");
    }
  }

  const auto& diag = opts.diagnostics;
  double c = 0.0;
  if (diag.track_potential) {
    if (!diag.ref_x || !diag.ref_y) throw ConfigurationError("potential tracking needs a reference (x, y)");
    const double c_min = weight_c(params, L_f, normA, regime);
    c = diag.potential_c.value_or(c_min);
    if (c < c_min) throw ParameterError("potential weight c is below the admissible minimum");
  }

  SolveResult result;
  IterateState st = init_state(p, params, x0);
  const double blowup = 1e12 * (1.0 + z_norm(st));

  auto record = [&](const IterateState& s) {
    TraceRow row;
    row.iter = s.k;
    if (diag.metrics) diag.metrics(s, row);
    if (diag.track_potential) row.potential = potential(p, params, s, *diag.ref_x, *diag.ref_y, c);
    row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    result.trace.push_back(row);
    return opts.stopping.converged && opts.stopping.converged(result.trace.back());
  };

  const long interval = std::max<long>(1, opts.stopping.record_interval);
  bool done = record(st);
  while (!done && st.k < opts.stopping.max_iter) {
    IterateState next = step(p, params, st);
    if (!finite_state(next) || z_norm(next) > blowup) {
      throw DivergenceError("iterates diverged at iteration " + std::to_string(next.k), std::move(st),
                            std::move(result.trace));
    }
    st = std::move(next);
    if (st.k % interval == 0 || st.k == opts.stopping.max_iter) done = record(st);
  }
  result.converged = done;
  if (result.trace.back().iter != st.k) record(st);
  result.iterations = st.k;
  result.state = std::move(st);
  return result;
}

}  // namespace unipd::solver
