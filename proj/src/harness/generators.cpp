#include "unipd/harness/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace unipd::harness {

std::string family_name(Family f) {
  switch (f) {
    case Family::kGeneric:
      return "generic";
    case Family::kLP:
      return "lp";
    case Family::kBP:
      return "bp";
    case Family::kL1L1:
      return "l1l1";
  }
  return "generic";
}

Family parse_family(const std::string& name) {
  if (name == "generic") return Family::kGeneric;
  if (name == "lp") return Family::kLP;
  if (name == "bp") return Family::kBP;
  if (name == "l1l1") return Family::kL1L1;
  throw ConfigurationError("unknown problem family '" + name + "'");
}

std::string ensemble_name(Ensemble e) { return e == Ensemble::kGaussian ? "gaussian" : "partial-dct"; }

Ensemble parse_ensemble(const std::string& name) {
  if (name == "gaussian") return Ensemble::kGaussian;
  if (name == "partial-dct" || name == "dct") return Ensemble::kPartialDct;
  throw ConfigurationError("unknown ensemble '" + name + "'");
}

std::uint64_t resolve_seed(std::uint64_t fallback) {
  const char* env = std::getenv("UNIPD_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') throw ConfigurationError("UNIPD_SEED must be a nonnegative integer");
  return v;
}

namespace {

using Rng = std::mt19937_64;

Mat gaussian_matrix(Rng& rng, long rows, long cols) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat M(rows, cols);
  // column-major fill keeps the draw order fixed
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) M(i, j) = nd(rng);
  return M;
}

Vec gaussian_vector(Rng& rng, long n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec v(n);
  for (long i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::vector<long> sample_indices(Rng& rng, long n, long k) {
  std::vector<long> all(n);
  std::iota(all.begin(), all.end(), 0L);
  std::vector<long> out;
  out.reserve(k);
  std::sample(all.begin(), all.end(), std::back_inserter(out), k, rng);
  return out;
}

}  // namespace

Instance gen_bp(long n, long m, long k, Ensemble ensemble, double dynamic_range_db, std::uint64_t seed) {
  if (n < 1 || m < 1 || k < 0 || k > n || m > n) throw ParameterError("gen_bp needs 0 <= k <= n and 1 <= m <= n");
  if (ensemble == Ensemble::kGaussian && static_cast<double>(m) * static_cast<double>(n) > 2e8) {
    throw ParameterError("gaussian ensemble too large for a dense matrix; use partial-dct");
  }
  Rng rng(seed);
  LinearOperator A = ensemble == Ensemble::kGaussian ? LinearOperator::dense(gaussian_matrix(rng, m, n))
                                                     : LinearOperator::partial_dct(n, sample_indices(rng, n, m));

  Vec x = Vec::Zero(n);
  for (long i : sample_indices(rng, n, k)) {
    if (ensemble == Ensemble::kGaussian) {
      x[i] = std::normal_distribution<double>(0.0, 1.0)(rng);
    } else {
      const double eta1 = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
      const double eta2 = uniform(rng, 0.0, 1.0);
      x[i] = eta1 * std::pow(10.0, dynamic_range_db * eta2 / 20.0);
    }
  }
  Vec b = A.apply(x);
  ConicProblem p{SmoothTerm::zero(n), ProxFunction::l1(1.0), std::move(A), std::move(b), Cone::zero(m),
                 alm::DualRegularizer::kZero};
  Instance inst{std::move(p)};
  inst.family = Family::kBP;
  inst.n_x = n;
  inst.ref = ReferenceSolution{x, std::nullopt, x.lpNorm<1>()};
  return inst;
}

Instance gen_l1l1(const Instance& bp, double zeta) {
  if (!(zeta > 0.0)) throw ParameterError("gen_l1l1 needs zeta > 0");
  const ConicProblem& base = bp.problem;
  if (!base.K.is_zero()) throw ConfigurationError("gen_l1l1 needs an equality-constrained base");
  const long n = base.n();
  const long m = base.m();
  LinearOperator A = LinearOperator::hconcat({base.A, LinearOperator::identity(m)});
  ProxFunction h = ProxFunction::separable_sum({prox::SumPart{ProxFunction::l1(zeta), 0, n},
                                                prox::SumPart{ProxFunction::l1(1.0), n, m}});
  ConicProblem p{SmoothTerm::zero(n + m), std::move(h), std::move(A), base.b, Cone::zero(m),
                 alm::DualRegularizer::kZero};
  Instance inst{std::move(p)};
  inst.family = Family::kL1L1;
  inst.n_x = n;
  return inst;
}

Instance gen_lp(long n, long m1, long m2, std::uint64_t seed) {
  if (n < 1 || m1 < 0 || m2 < 0 || m1 + m2 < 1) throw ParameterError("gen_lp needs n >= 1 and m1 + m2 >= 1");
  Rng rng(seed);
  const long m = m1 + m2;

  Vec lower(n), upper(n), x(n), v = Vec::Zero(n);
  for (long i = 0; i < n; ++i) {
    lower[i] = -uniform(rng, 0.5, 1.5);
    upper[i] = uniform(rng, 0.5, 1.5);
    const double u = uniform(rng, 0.0, 1.0);
    if (u < 0.25) {
      x[i] = lower[i];
      v[i] = -uniform(rng, 0.5, 1.5);
    } else if (u < 0.5) {
      x[i] = upper[i];
      v[i] = uniform(rng, 0.5, 1.5);
    } else {
      x[i] = uniform(rng, 0.8 * lower[i], 0.8 * upper[i]);
    }
  }

  const Mat M = gaussian_matrix(rng, m, n);  // [C; A]
  Vec rhs = M * x;
  Vec y = Vec::Zero(m);
  for (long i = 0; i < m2; ++i) y[i] = std::normal_distribution<double>(0.0, 1.0)(rng);
  long active = 0;
  for (long i = m2; i < m; ++i) {
    if (uniform(rng, 0.0, 1.0) < 0.5) {
      y[i] = -uniform(rng, 0.5, 1.5);
      ++active;
    } else {
      rhs[i] += uniform(rng, 0.5, 1.5);
    }
  }
  if (m1 > 0 && active == 0) {
    // keep at least one active inequality with a nonzero multiplier
    rhs[m2] = (M.row(m2) * x)(0);
    y[m2] = -1.0;
  }

  // stationarity r - M'y + v = 0 with v in the normal cone of the box at x*
  const Vec r = M.transpose() * y - v;
  std::vector<Cone> parts;
  if (m2 > 0) parts.push_back(Cone::zero(m2));
  if (m1 > 0) parts.push_back(Cone::nonpos(m1));
  ConicProblem p{SmoothTerm::linear(r), ProxFunction::box(lower, upper), LinearOperator::dense(M), rhs,
                 Cone::product(parts), alm::DualRegularizer::kZero};
  Instance inst{std::move(p)};
  inst.family = Family::kLP;
  inst.n_x = n;
  inst.m_eq = m2;
  inst.ref = ReferenceSolution{x, y, r.dot(x)};
  return inst;
}

double lp_dual_objective(const Instance& lp) {
  if (lp.family != Family::kLP || !lp.ref || !lp.ref->y_star) throw ConfigurationError("not a planted LP");
  const auto* box = std::get_if<prox::BoxFn>(&lp.problem.h.fn());
  const auto* lin = std::get_if<alm::LinearSmooth>(&lp.problem.f.term());
  if (box == nullptr || lin == nullptr) throw ConfigurationError("LP needs linear f and box h");
  const Vec& y = *lp.ref->y_star;
  const Vec v = lp.problem.A.adjoint_apply(y) - lin->r;
  double val = lp.problem.b.dot(y);
  for (long i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0) val -= v[i] * box->lower[i];
    if (v[i] > 0.0) val -= v[i] * box->upper[i];
  }
  return val;
}

Instance gen_qp(long n, long m, std::uint64_t seed) {
  if (n < 1 || m < 1 || m > n) throw ParameterError("gen_qp needs 1 <= m <= n");
  Rng rng(seed);
  const Mat G = gaussian_matrix(rng, n, n);
  Mat Q = G.transpose() * G / static_cast<double>(n);
  Q.diagonal().array() += 1.0;
  Q = 0.5 * (Q + Q.transpose()).eval();
  const Mat A = gaussian_matrix(rng, m, n);
  const Vec x = gaussian_vector(rng, n);
  const Vec y = gaussian_vector(rng, m);
  const Vec q = A.transpose() * y - Q * x;
  Vec b = A * x;
  SmoothTerm f = SmoothTerm::quadratic(Q, q);
  const double phi = f.value(x);
  ConicProblem p{std::move(f), ProxFunction::zero(), LinearOperator::dense(A), std::move(b), Cone::zero(m),
                 alm::DualRegularizer::kZero};
  Instance inst{std::move(p)};
  inst.n_x = n;
  inst.ref = ReferenceSolution{x, y, phi};
  return inst;
}

Instance gen_composite(long n, long m, long k, bool quadratic, std::uint64_t seed) {
  if (n < 1 || m < 1 || m > n || k < 0 || k > n) throw ParameterError("gen_composite sizes invalid");
  Rng rng(seed);
  const double zeta = 1.0;
  const Mat A = gaussian_matrix(rng, m, n);
  Vec x = Vec::Zero(n);
  Vec g(n);
  for (long i = 0; i < n; ++i) g[i] = uniform(rng, -0.9, 0.9);
  for (long i : sample_indices(rng, n, k)) {
    x[i] = std::normal_distribution<double>(0.0, 1.0)(rng);
    g[i] = x[i] > 0.0 ? 1.0 : -1.0;
  }
  const Vec y = gaussian_vector(rng, m);
  Vec b = A * x;

  // stationarity: grad f(x*) - A'y* + zeta g = 0 with g in the l1 subdifferential
  SmoothTerm f = SmoothTerm::zero(n);
  if (quadratic) {
    const long rank = std::max<long>(1, n / 2);
    const Mat G = gaussian_matrix(rng, rank, n);
    Mat Q = G.transpose() * G / static_cast<double>(n);
    Q = 0.5 * (Q + Q.transpose()).eval();
    const Vec q = A.transpose() * y - Q * x - zeta * g;
    f = SmoothTerm::quadratic(Q, q);
  } else {
    f = SmoothTerm::linear(A.transpose() * y - zeta * g);
  }
  const double phi = f.value(x) + zeta * x.lpNorm<1>();
  ConicProblem p{std::move(f), ProxFunction::l1(zeta), LinearOperator::dense(A), std::move(b), Cone::zero(m),
                 alm::DualRegularizer::kZero};
  Instance inst{std::move(p)};
  inst.n_x = n;
  inst.ref = ReferenceSolution{x, y, phi};
  return inst;
}

Counterexample gen_counterexample(int which) {
  Mat A;
  if (which == 1) {
    A.resize(3, 3);
    A << 1, 1, 1, 1, 1, 2, 1, 2, 2;
  } else if (which == 2) {
    A.resize(3, 4);
    A << 1, 1, 1, 1, 1, 1, 1, 2, 1, 1, 2, 2;
  } else {
    throw ParameterError("counterexample must be 1 or 2");
  }
  const long n = A.cols();
  baselines::BlockProblem bp;
  bp.b = Vec::Zero(3);
  bp.rho1 = 1.0;
  bp.split = false;
  for (long j = 0; j < n; ++j) {
    if (which == 2 && j == 0) {
      bp.blocks.push_back(baselines::Block::quadratic(A.col(0), Mat::Identity(1, 1), Vec::Zero(1)));
    } else {
      bp.blocks.push_back(baselines::Block::zero(A.col(j)));
    }
  }

  SmoothTerm f = SmoothTerm::zero(n);
  if (which == 2) {
    Mat Q = Mat::Zero(n, n);
    Q(0, 0) = 1.0;
    f = SmoothTerm::quadratic(Q, Vec::Zero(n));
  }
  ConicProblem p{std::move(f), ProxFunction::zero(), LinearOperator::dense(A), Vec::Zero(3), Cone::zero(3),
                 alm::DualRegularizer::kZero};
  Instance inst{std::move(p)};
  inst.n_x = n;
  inst.partition.assign(n, 1);
  inst.ref = ReferenceSolution{Vec::Zero(n), Vec::Zero(3), 0.0};
  return {std::move(bp), std::move(inst)};
}

}  // namespace unipd::harness
