#include "unipd/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace unipd::solver {

std::string regime_name(Regime regime) { return regime == Regime::kAffine ? "affine" : "conic"; }

Regime parse_regime(const std::string& name) {
  if (name == "affine") return Regime::kAffine;
  if (name == "conic") return Regime::kConic;
  throw ConfigurationError("unknown regime '" + name + "'");
}

double t_func(double a, double b) {
  if (a > b) return b + (a - b) * (a - b) / (2.0 * a - b);
  return b;
}

double gamma_w(const SolverParams& prm) {
  const double a = prm.alpha;
  const double d = std::abs(prm.mu - prm.beta);
  return t_func(2.0 - 2.0 * a, (1.0 - a) * (1.0 - a) + (1.0 + a) * d);
}

double gamma_y(const SolverParams& prm) {
  const double diff = prm.mu - prm.beta;
  return diff * diff + (1.0 + prm.alpha) * std::abs(diff) + 4.0 * diff;
}

double weight_c(const SolverParams& prm, double L_f, double normA, Regime regime) {
  const double L_rho = L_f + prm.rho * normA * normA;
  const double root = std::sqrt(prm.sigma * prm.tau) * normA;
  const double mb = std::abs(prm.mu * prm.beta);
  if (regime == Regime::kAffine) {
    return prm.alpha * prm.tau * L_rho + std::max(mb * root, prm.alpha * root);
  }
  if (!(prm.rho > 0.0)) throw ParameterError("conic weight needs rho > 0");
  return std::max(prm.alpha * prm.tau * L_rho, mb * prm.sigma / prm.rho) + std::max(prm.alpha, mb) * root;
}

Mat assemble_pc(const SolverParams& prm, double L_f, double normA, const Mat& A, double c) {
  const long m = A.rows();
  const long n = A.cols();
  const double L_rho = L_f + prm.rho * normA * normA;
  const double off = (1.0 - prm.alpha - prm.beta + prm.mu) / 2.0;
  const double half_diff = (prm.beta - prm.mu) / 2.0;
  const double dx = (1.0 - 2.0 * c) / (2.0 * prm.tau) - (1.0 - prm.alpha) * L_rho / 2.0;
  const double dy = (1.0 - 2.0 * c) / (2.0 * prm.sigma);

  Mat P = Mat::Zero(2 * m + n, 2 * m + n);
  P.block(0, 0, m, m).diagonal().setConstant(prm.rho);
  P.block(0, m + n, m, m).diagonal().setConstant(off);
  P.block(m + n, 0, m, m).diagonal().setConstant(off);
  P.block(m, m, n, n).diagonal().setConstant(dx);
  P.block(m, m + n, n, m) = half_diff * A.transpose();
  P.block(m + n, m, m, n) = half_diff * A;
  P.block(m + n, m + n, m, m).diagonal().setConstant(dy);
  return P;
}

Mat assemble_pc_prime(const SolverParams& prm, double L_f, const Mat& A, double c) {
  if (!(prm.rho > 0.0)) throw ParameterError("conic matrix needs rho > 0");
  const long m = A.rows();
  const long n = A.cols();
  const double gw = gamma_w(prm);
  const double gy = gamma_y(prm);
  const double dx = (1.0 - 2.0 * c) / (2.0 * prm.tau) - (1.0 - prm.alpha) * L_f / 2.0;
  const double dy = (1.0 - 2.0 * c) / (2.0 * prm.sigma) - (gw + gy) / (4.0 * prm.rho);

  Mat P = Mat::Zero(n + m, n + m);
  P.block(0, 0, n, n) = -(prm.rho * gw / 4.0) * (A.transpose() * A);
  P.block(0, 0, n, n).diagonal().array() += dx;
  P.block(0, n, n, m) = (gw / 4.0) * A.transpose();
  P.block(n, 0, m, n) = (gw / 4.0) * A;
  P.block(n, n, m, m).diagonal().setConstant(dy);
  return P;
}

namespace {

double min_eigenvalue(const Mat& P) {
  Eigen::SelfAdjointEigenSolver<Mat> es(P, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NonConvergenceError("symmetric eigensolver failed", 0.0);
  return es.eigenvalues().minCoeff();
}

struct Scalar {
  bool available = false;
  bool ok = false;
  std::string detail;
};

Scalar scalar_check(const SolverParams& prm, double L_f, double normA, Regime regime) {
  const double tau = prm.tau;
  const double sigma = prm.sigma;
  const double rho = prm.rho;
  const double a2 = normA * normA;
  const double L_rho = L_f + rho * a2;
  const double root = std::sqrt(sigma * tau) * normA;
  const double inv_tau = 1.0 / tau;

  Preset preset = prm.preset == Preset::kLALM ? Preset::kPDHG : prm.preset;
  Scalar s;
  s.available = preset != Preset::kCustom;
  if (!s.available) {
    s.detail = "scalar conditions unavailable";
    return s;
  }
  std::ostringstream os;
  os.precision(6);

  if (regime == Regime::kConic && !(rho > 0.0)) {
    s.detail = "conic regime requires rho > 0";
    return s;
  }

  if (preset == Preset::kCP) {
    const double rhs = L_f + (rho + sigma) * a2;
    s.ok = inv_tau >= rhs;
    os << "1/tau = " << inv_tau << " >= L_f + (rho + sigma)||A||^2 = " << rhs;
    s.detail = os.str();
    return s;
  }

  if (regime == Regime::kAffine) {
    switch (preset) {
      case Preset::kSOGDA: {
        if (!(rho > 0.0)) {
          s.detail = "sigma/(2 rho) is unbounded at rho = 0";
          return s;
        }
        const double lhs = 2.0 * root + std::max(sigma / (2.0 * rho), tau * L_rho);
        s.ok = lhs <= 1.0;
        os << "2 sqrt(sigma tau)||A|| + max(sigma/(2 rho), tau L_frho) = " << lhs << " <= 1";
        break;
      }
      case Preset::kPDHG: {
        const double rhs = L_f + rho * a2;
        s.ok = sigma <= 2.0 * rho && inv_tau >= rhs;
        os << "sigma = " << sigma << " <= 2 rho = " << 2.0 * rho << "; 1/tau = " << inv_tau
           << " >= L_f + rho||A||^2 = " << rhs;
        break;
      }
      case Preset::kGDA: {
        if (!(sigma < rho / 2.0)) {
          os << "sigma = " << sigma << " < rho/2 = " << rho / 2.0 << " fails";
          break;
        }
        const double rhs = L_f + rho * a2 * (rho - sigma) / (rho - 2.0 * sigma);
        s.ok = inv_tau >= rhs;
        os << "1/tau = " << inv_tau << " >= " << rhs;
        break;
      }
      case Preset::kOGDA: {
        const double lhs = tau * L_rho + root;
        s.ok = lhs <= 0.5;
        os << "tau L_frho + sqrt(sigma tau)||A|| = " << lhs << " <= 1/2";
        break;
      }
      default:
        break;
    }
  } else {
    switch (preset) {
      case Preset::kSOGDA: {
        const double lhs = root + sigma / rho;
        const double gap = 0.375 * rho - sigma;
        if (!(lhs <= 0.375) || !(gap > 0.0)) {
          os << "sqrt(sigma tau)||A|| + sigma/rho = " << lhs << " <= 3/8 fails";
          break;
        }
        const double rhs = 4.0 * L_f + rho * a2 * rho / gap;
        s.ok = inv_tau >= rhs;
        os << "sqrt(sigma tau)||A|| + sigma/rho = " << lhs << " <= 3/8; 1/tau = " << inv_tau << " >= " << rhs;
        break;
      }
      case Preset::kPDHG: {
        if (!(sigma < 1.5 * rho)) {
          os << "sigma = " << sigma << " < 3 rho/2 = " << 1.5 * rho << " fails";
          break;
        }
        const double rhs = L_f + rho * a2 * rho / (1.5 * rho - sigma);
        s.ok = inv_tau >= rhs;
        os << "1/tau = " << inv_tau << " >= " << rhs;
        break;
      }
      case Preset::kGDA: {
        if (!(sigma < rho / 4.0)) {
          os << "sigma = " << sigma << " < rho/4 = " << rho / 4.0 << " fails";
          break;
        }
        const double rhs = L_f + rho * a2 * (rho - 3.0 * sigma) / (rho - 4.0 * sigma);
        s.ok = inv_tau >= rhs;
        os << "1/tau = " << inv_tau << " >= " << rhs;
        break;
      }
      case Preset::kOGDA: {
        const double lhs = std::max(tau * L_rho, sigma / rho) + root;
        s.ok = lhs <= 0.5;
        os << "max(tau L_frho, sigma/rho) + sqrt(sigma tau)||A|| = " << lhs << " <= 1/2";
        break;
      }
      default:
        break;
    }
  }
  s.detail = os.str();
  return s;
}

}  // namespace

bool scalar_condition(const SolverParams& params, double L_f, double normA, Regime regime) {
  return scalar_check(params, L_f, normA, regime).ok;
}

CertReport certify_stepsizes(const SolverParams& params, double L_f, double normA, Regime regime,
                             const Mat* A_dense) {
  params.validate();
  CertReport r;
  r.regime = regime;

  if (regime == Regime::kConic && !(params.rho > 0.0)) {
    r.message = "conic regime requires rho > 0";
    return r;
  }
  r.c = weight_c(params, L_f, normA, regime);

  const Scalar s = scalar_check(params, L_f, normA, regime);
  r.scalar_available = s.available;
  r.scalar_ok = s.ok;
  r.scalar_detail = s.detail;

  if (A_dense != nullptr && A_dense->cols() + 2 * A_dense->rows() <= kPsdMaxSize) {
    r.psd_checked = true;
    if (regime == Regime::kAffine) {
      r.min_eig = min_eigenvalue(assemble_pc(params, L_f, normA, *A_dense, r.c));
      r.psd_ok = r.min_eig >= kPsdTolerance;
    } else {
      const Mat P = assemble_pc_prime(params, L_f, *A_dense, r.c);
      r.min_eig = min_eigenvalue(P);
      Mat shifted = P;
      const long n = A_dense->cols();
      const long m = A_dense->rows();
      shifted.diagonal().head(n).array() += r.c / params.tau;
      shifted.diagonal().tail(m).array() += r.c / params.sigma;
      r.min_eig_shifted = min_eigenvalue(shifted);
      r.psd_ok = r.min_eig >= kPsdTolerance && *r.min_eig_shifted > kPsdTolerance;
    }
  }

  r.certified = r.scalar_ok || (r.psd_checked && r.psd_ok);
  std::ostringstream os;
  if (!s.available && !r.psd_checked) {
    os << "scalar conditions unavailable; PSD check skipped";
  } else {
    if (s.available) os << "scalar " << (s.ok ? "ok" : "fails") << ": " << s.detail;
    if (r.psd_checked) {
      if (s.available) os << "; ";
      os << "min eigenvalue " << r.min_eig << (r.psd_ok ? " (psd)" : " (not psd)");
    } else if (s.available) {
      os << "; PSD check skipped";
    }
  }
  r.message = os.str();
  return r;
}

SolverParams auto_stepsizes(Preset preset, double L_f, double normA, Regime regime, const AutoStepOptions& opts) {
  if (preset == Preset::kCustom) throw ParameterError("auto_stepsizes needs a named preset");
  if (!(L_f >= 0.0) || !(normA >= 0.0)) throw ParameterError("L_f and ||A|| must be nonnegative");
  if (!(opts.ratio > 0.0) || !(opts.slack > 0.0 && opts.slack <= 1.0)) {
    throw ParameterError("ratio must be positive and slack in (0, 1]");
  }

  if ((preset == Preset::kSOGDA || preset == Preset::kLALM) && L_f > 0.0 && normA > 0.0 && !opts.rho) {
    const double a2 = normA * normA;
    SolverParams prm = preset == Preset::kSOGDA
                           ? SolverParams::from_preset(preset, 1.0 / (8.0 * L_f), L_f / (4.0 * a2), L_f / (4.0 * a2))
                           : SolverParams::from_preset(preset, 1.0 / (2.0 * L_f), L_f / (2.0 * a2), L_f / (2.0 * a2));
    if (scalar_condition(prm, L_f, normA, regime)) return prm;
  }

  double rho = 1.0;
  if (opts.rho) {
    rho = *opts.rho;
  } else if (normA > 0.0) {
    rho = L_f > 0.0 ? L_f / (2.0 * normA * normA) : 1.0 / normA;
  }
  if (!(rho >= 0.0)) throw ParameterError("rho must be nonnegative");
  if (regime == Regime::kConic && !(rho > 0.0)) throw ParameterError("conic regime requires rho > 0");
  if (preset == Preset::kLALM && !(rho > 0.0)) throw ParameterError("lalm requires rho > 0");

  auto ok = [&](double tau) {
    return scalar_condition(SolverParams::from_preset(preset, tau, opts.ratio * tau, rho), L_f, normA, regime);
  };

  double lo = 1.0;
  double hi = 1.0;
  if (ok(lo)) {
    while (ok(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) return SolverParams::from_preset(preset, opts.slack * lo, opts.ratio * opts.slack * lo, rho);
    }
  } else {
    while (!ok(lo)) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) {
        throw ParameterError("no step sizes satisfy the " + preset_name(preset) + " condition at rho = " +
                             std::to_string(rho));
      }
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  const double tau = opts.slack * lo;
  SolverParams prm = SolverParams::from_preset(preset, tau, opts.ratio * tau, rho);
  if (!scalar_condition(prm, L_f, normA, regime)) {
    throw ParameterError("generic step-size recipe failed to certify");
  }
  return prm;
}

}  // namespace unipd::solver
