#include "unipd/baselines.hpp"

#include <chrono>
#include <cmath>

namespace unipd::baselines {

Block Block::zero(Mat A) {
  Block b;
  b.kind = BlockKind::kZero;
  b.A = std::move(A);
  return b;
}

Block Block::l1(Mat A, double zeta) {
  if (!(zeta > 0.0)) throw ParameterError("l1 block weight must be positive");
  Block b;
  b.kind = BlockKind::kL1;
  b.zeta = zeta;
  b.A = std::move(A);
  return b;
}

Block Block::quadratic(Mat A, Mat Q, Vec q) {
  require_dim(Q.rows(), A.cols(), "Block::quadratic Q rows");
  require_dim(Q.cols(), A.cols(), "Block::quadratic Q cols");
  require_dim(q.size(), A.cols(), "Block::quadratic q");
  Block b;
  b.kind = BlockKind::kQuadratic;
  b.A = std::move(A);
  b.Q = std::move(Q);
  b.q = std::move(q);
  return b;
}

long BlockProblem::n() const {
  long n = 0;
  for (const auto& blk : blocks) n += blk.width();
  return n;
}

std::vector<long> BlockProblem::offsets() const {
  std::vector<long> off;
  long acc = 0;
  for (const auto& blk : blocks) {
    off.push_back(acc);
    acc += blk.width();
  }
  return off;
}

Mat BlockProblem::assembled_A() const {
  Mat A(m(), n());
  long off = 0;
  for (const auto& blk : blocks) {
    A.middleCols(off, blk.width()) = blk.A;
    off += blk.width();
  }
  return A;
}

void BlockProblem::validate() const {
  if (blocks.empty()) throw DimensionError("block problem has no blocks");
  for (const auto& blk : blocks) {
    require_dim(blk.A.rows(), m(), "block operator rows");
    if (blk.kind == BlockKind::kL1 && !split) {
      throw ConfigurationError("l1 blocks have no closed-form update without the u-split");
    }
  }
  if (!(rho1 > 0.0)) throw ParameterError("rho1 must be positive");
  if (split && !(rho2 > 0.0)) throw ParameterError("rho2 must be positive");
}

BlockProblem make_l1_blocks(const Mat& A, const Vec& b, int num_blocks, double rho1, double rho2) {
  require_dim(b.size(), A.rows(), "make_l1_blocks b");
  if (num_blocks < 1 || num_blocks > A.cols()) throw ParameterError("invalid block count");
  BlockProblem bp;
  bp.b = b;
  bp.rho1 = rho1;
  bp.rho2 = rho2;
  bp.split = true;
  const long n = A.cols();
  long off = 0;
  for (int i = 0; i < num_blocks; ++i) {
    const long w = n / num_blocks + (i < n % num_blocks ? 1 : 0);
    bp.blocks.push_back(Block::l1(A.middleCols(off, w)));
    off += w;
  }
  return bp;
}

AdmmState admm_init(const BlockProblem& bp, const Vec& x0) {
  bp.validate();
  require_dim(x0.size(), bp.n(), "admm_init x0");
  AdmmState st;
  st.x = x0;
  st.y = Vec::Zero(bp.m());
  if (bp.split) {
    st.u = x0;
    st.z = Vec::Zero(bp.n());
  }
  return st;
}

namespace {

double block_objective(const Block& blk, const Vec& xi) {
  switch (blk.kind) {
    case BlockKind::kZero:
      return 0.0;
    case BlockKind::kL1:
      return blk.zeta * xi.lpNorm<1>();
    case BlockKind::kQuadratic:
      return 0.5 * xi.dot(blk.Q * xi) + blk.q.dot(xi);
  }
  return 0.0;
}

Vec soft(const Vec& v, double t) { return v.array().sign() * (v.array().abs() - t).max(0.0); }

}  // namespace

double eval_lagrangian(const BlockProblem& bp, const AdmmState& st) {
  const auto off = bp.offsets();
  double val = 0.0;
  Vec coupling = -bp.b;
  const Vec& v = bp.split ? st.u : st.x;
  for (std::size_t i = 0; i < bp.blocks.size(); ++i) {
    const auto& blk = bp.blocks[i];
    val += block_objective(blk, st.x.segment(off[i], blk.width()));
    coupling += blk.A * v.segment(off[i], blk.width());
  }
  val += -st.y.dot(coupling) + 0.5 * bp.rho1 * coupling.squaredNorm();
  if (bp.split) {
    const Vec d = st.x - st.u;
    val += -st.z.dot(d) + 0.5 * bp.rho2 * d.squaredNorm();
  }
  return val;
}

AdmmSolver::AdmmSolver(BlockProblem bp) : bp_(std::move(bp)) {
  bp_.validate();
  offsets_ = bp_.offsets();
  for (const auto& blk : bp_.blocks) {
    Factor f;
    const Mat& A = blk.A;
    if (bp_.split) {
      f.woodbury = A.rows() < A.cols();
      if (f.woodbury) {
        Mat M = A * A.transpose();
        M.diagonal().array() += bp_.rho2 / bp_.rho1;
        f.llt.compute(M);
      } else {
        Mat M = bp_.rho1 * (A.transpose() * A);
        M.diagonal().array() += bp_.rho2;
        f.llt.compute(M);
      }
    } else {
      Mat M = bp_.rho1 * (A.transpose() * A);
      if (blk.kind == BlockKind::kQuadratic) M += blk.Q;
      f.llt.compute(M);
    }
    if (f.llt.info() != Eigen::Success) throw Error("singular block update system");
    factors_.push_back(std::move(f));
  }
}

Vec AdmmSolver::solve_block(std::size_t i, const Vec& rhs) const {
  const Factor& f = factors_[i];
  if (!f.woodbury) return f.llt.solve(rhs);
  // (rho2 I + rho1 A'A)^{-1} = (1/rho2) (I - A' (rho2/rho1 I + A A')^{-1} A)
  const Mat& A = bp_.blocks[i].A;
  return (rhs - A.transpose() * f.llt.solve(A * rhs)) / bp_.rho2;
}

Vec AdmmSolver::coupling_sum(const AdmmState& st) const {
  const Vec& v = bp_.split ? st.u : st.x;
  Vec s = Vec::Zero(bp_.m());
  for (std::size_t i = 0; i < bp_.blocks.size(); ++i) {
    s += bp_.blocks[i].A * v.segment(offsets_[i], bp_.blocks[i].width());
  }
  return s;
}

void AdmmSolver::update_x_block(AdmmState& st, std::size_t i) const {
  const Block& blk = bp_.blocks[i];
  const long off = offsets_[i];
  const long w = blk.width();
  if (bp_.split) {
    // argmin psi_i(x_i) - z_i'(x_i - u_i) + rho2/2 ||x_i - u_i||^2
    const Vec center = st.u.segment(off, w) + st.z.segment(off, w) / bp_.rho2;
    switch (blk.kind) {
      case BlockKind::kZero:
        st.x.segment(off, w) = center;
        break;
      case BlockKind::kL1:
        st.x.segment(off, w) = soft(center, blk.zeta / bp_.rho2);
        break;
      case BlockKind::kQuadratic: {
        Mat M = blk.Q;
        M.diagonal().array() += bp_.rho2;
        st.x.segment(off, w) = M.llt().solve(bp_.rho2 * center - blk.q);
        break;
      }
    }
    return;
  }
  const Vec others = coupling_sum(st) - blk.A * st.x.segment(off, w) - bp_.b;
  Vec rhs = blk.A.transpose() * (st.y - bp_.rho1 * others);
  if (blk.kind == BlockKind::kQuadratic) rhs -= blk.q;
  st.x.segment(off, w) = solve_block(i, rhs);
}

void AdmmSolver::update_u_block(AdmmState& st, std::size_t i) const {
  if (!bp_.split) throw ConfigurationError("u-update requires the split formulation");
  const Block& blk = bp_.blocks[i];
  const long off = offsets_[i];
  const long w = blk.width();
  const Vec others = coupling_sum(st) - blk.A * st.u.segment(off, w);
  const Vec rhs = blk.A.transpose() * (st.y + bp_.rho1 * (bp_.b - others)) + bp_.rho2 * st.x.segment(off, w) -
                  st.z.segment(off, w);
  st.u.segment(off, w) = solve_block(i, rhs);
}

void AdmmSolver::update_multipliers(AdmmState& st) const {
  st.y -= bp_.rho1 * (coupling_sum(st) - bp_.b);
  if (bp_.split) st.z -= bp_.rho2 * (st.x - st.u);
}

AdmmState AdmmSolver::step(const AdmmState& st) const {
  AdmmState out = st;
  for (std::size_t i = 0; i < bp_.blocks.size(); ++i) update_x_block(out, i);
  if (bp_.split) {
    for (std::size_t i = 0; i < bp_.blocks.size(); ++i) update_u_block(out, i);
  }
  update_multipliers(out);
  out.k = st.k + 1;
  return out;
}

AdmmState admm_step(const BlockProblem& bp, const AdmmState& st) { return AdmmSolver(bp).step(st); }

namespace {

double state_norm(const AdmmState& st) {
  return std::sqrt(st.x.squaredNorm() + st.u.squaredNorm() + st.y.squaredNorm() + st.z.squaredNorm());
}

bool state_finite(const AdmmState& st) {
  return st.x.allFinite() && st.u.allFinite() && st.y.allFinite() && st.z.allFinite();
}

}  // namespace

AdmmResult admm_solve(const BlockProblem& bp, const AdmmState& st0, const solver::StoppingRule& stop, double tol,
                      const AdmmMetricsHook& metrics) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const AdmmSolver engine(bp);
  const Mat A = bp.assembled_A();

  AdmmResult res;
  AdmmState st = st0;
  const double blowup = 1e12 * (1.0 + state_norm(st));

  auto record = [&](const AdmmState& s) {
    solver::TraceRow row;
    row.iter = s.k;
    if (metrics) metrics(s, row);
    row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    res.trace.push_back(row);
    return stop.converged && stop.converged(res.trace.back());
  };

  const long interval = std::max<long>(1, stop.record_interval);
  bool done = record(st);
  while (!done && st.k < stop.max_iter) {
    AdmmState next = engine.step(st);
    if (!state_finite(next) || state_norm(next) > blowup) {
      throw AdmmDivergenceError("ADMM iterates diverged at sweep " + std::to_string(next.k), std::move(st),
                                std::move(res.trace));
    }
    bool small = false;
    if (tol > 0.0) {
      const Vec& v_new = bp.split ? next.u : next.x;
      const Vec& v_old = bp.split ? st.u : st.x;
      double primal = (A * v_new - bp.b).norm();
      if (bp.split) primal += (next.x - next.u).norm();
      const double dual = bp.rho1 * (A * (v_new - v_old)).norm();
      small = primal <= tol && dual <= tol;
    }
    st = std::move(next);
    if (st.k % interval == 0 || st.k == stop.max_iter || small) done = record(st);
    if (small) done = true;
  }
  res.converged = done;
  if (res.trace.back().iter != st.k) record(st);
  res.iterations = st.k;
  res.state = std::move(st);
  return res;
}

}  // namespace unipd::baselines
