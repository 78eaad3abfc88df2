#include "unipd/linops.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "unipd/errors.hpp"

namespace unipd::linops {

namespace {

constexpr int kPowerIterationCap = 5000;
constexpr std::uint64_t kPowerIterationSeed = 0x5eedULL;

}  // namespace

class OperatorImpl {
 public:
  OperatorKind kind;
  long m = 0;
  long n = 0;

  Mat dense;

  std::vector<long> dct_rows;
  std::vector<double> cos_table;  // cos(pi q / (2n)), q in [0, 4n)

  std::vector<LinearOperator> blocks;
  std::vector<long> offsets;

  mutable std::mutex norm_mutex;
  mutable std::optional<double> norm_value;
  mutable double norm_tol = 0.0;

  double dct_scale(long k) const {
    return k == 0 ? std::sqrt(1.0 / static_cast<double>(n)) : std::sqrt(2.0 / static_cast<double>(n));
  }

  double dct_entry(long k, long j) const {
    const long period = 4 * n;
    return dct_scale(k) * cos_table[static_cast<std::size_t>(((2 * j + 1) * k) % period)];
  }
};

LinearOperator::LinearOperator(std::shared_ptr<const OperatorImpl> impl) : impl_(std::move(impl)) {}

LinearOperator LinearOperator::dense(Mat matrix) {
  auto impl = std::make_shared<OperatorImpl>();
  impl->kind = OperatorKind::kDense;
  impl->m = matrix.rows();
  impl->n = matrix.cols();
  impl->dense = std::move(matrix);
  return LinearOperator(std::move(impl));
}

LinearOperator LinearOperator::identity(long n) { return dense(Mat::Identity(n, n)); }

LinearOperator LinearOperator::partial_dct(long n, std::vector<long> rows) {
  if (n <= 0) throw ParameterError("partial_dct: n must be positive");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (long k : rows) {
    if (k < 0 || k >= n) throw DimensionError("partial_dct: row index out of range");
    if (seen[static_cast<std::size_t>(k)]) throw ParameterError("partial_dct: duplicate row index");
    seen[static_cast<std::size_t>(k)] = true;
  }
  auto impl = std::make_shared<OperatorImpl>();
  impl->kind = OperatorKind::kPartialDct;
  impl->m = static_cast<long>(rows.size());
  impl->n = n;
  impl->dct_rows = std::move(rows);
  impl->cos_table.resize(static_cast<std::size_t>(4 * n));
  for (long q = 0; q < 4 * n; ++q) {
    impl->cos_table[static_cast<std::size_t>(q)] =
        std::cos(std::numbers::pi * static_cast<double>(q) / (2.0 * static_cast<double>(n)));
  }
  return LinearOperator(std::move(impl));
}

LinearOperator LinearOperator::hconcat(std::vector<LinearOperator> blocks) {
  if (blocks.empty()) throw ParameterError("hconcat: need at least one block");
  auto impl = std::make_shared<OperatorImpl>();
  impl->kind = OperatorKind::kHConcat;
  impl->m = blocks.front().rows();
  impl->offsets.push_back(0);
  for (const auto& b : blocks) {
    if (b.rows() != impl->m) throw DimensionError("hconcat: blocks must share the row count");
    impl->offsets.push_back(impl->offsets.back() + b.cols());
  }
  impl->n = impl->offsets.back();
  impl->blocks = std::move(blocks);
  return LinearOperator(std::move(impl));
}

long LinearOperator::rows() const { return impl_->m; }
long LinearOperator::cols() const { return impl_->n; }
OperatorKind LinearOperator::kind() const { return impl_->kind; }

Vec LinearOperator::apply(const Vec& x) const {
  require_dim(x.size(), impl_->n, "LinearOperator::apply");
  switch (impl_->kind) {
    case OperatorKind::kDense:
      return impl_->dense * x;
    case OperatorKind::kPartialDct: {
      std::vector<long> support;
      for (long j = 0; j < impl_->n; ++j) {
        if (x[j] != 0.0) support.push_back(j);
      }
      Vec out(impl_->m);
      for (long i = 0; i < impl_->m; ++i) {
        const long k = impl_->dct_rows[static_cast<std::size_t>(i)];
        double acc = 0.0;
        for (long j : support) acc += impl_->dct_entry(k, j) * x[j];
        out[i] = acc;
      }
      return out;
    }
    case OperatorKind::kHConcat: {
      Vec out = Vec::Zero(impl_->m);
      for (std::size_t b = 0; b < impl_->blocks.size(); ++b) {
        const long off = impl_->offsets[b];
        const long len = impl_->offsets[b + 1] - off;
        out += impl_->blocks[b].apply(x.segment(off, len));
      }
      return out;
    }
  }
  return {};
}

Vec LinearOperator::adjoint_apply(const Vec& y) const {
  require_dim(y.size(), impl_->m, "LinearOperator::adjoint_apply");
  switch (impl_->kind) {
    case OperatorKind::kDense:
      return impl_->dense.transpose() * y;
    case OperatorKind::kPartialDct: {
      Vec out = Vec::Zero(impl_->n);
      for (long i = 0; i < impl_->m; ++i) {
        const long k = impl_->dct_rows[static_cast<std::size_t>(i)];
        const double yi = y[i];
        if (yi == 0.0) continue;
        for (long j = 0; j < impl_->n; ++j) out[j] += impl_->dct_entry(k, j) * yi;
      }
      return out;
    }
    case OperatorKind::kHConcat: {
      Vec out(impl_->n);
      for (std::size_t b = 0; b < impl_->blocks.size(); ++b) {
        const long off = impl_->offsets[b];
        const long len = impl_->offsets[b + 1] - off;
        out.segment(off, len) = impl_->blocks[b].adjoint_apply(y);
      }
      return out;
    }
  }
  return {};
}

double LinearOperator::op_norm(double tol) const {
  if (!(tol > 0.0)) throw ParameterError("op_norm: tol must be positive");
  {
    std::lock_guard<std::mutex> lock(impl_->norm_mutex);
    if (impl_->norm_value && impl_->norm_tol <= tol) return *impl_->norm_value;
  }
  if (impl_->n == 0 || impl_->m == 0) return 0.0;

  std::mt19937_64 rng(kPowerIterationSeed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(impl_->n);
  for (long j = 0; j < impl_->n; ++j) v[j] = normal(rng);
  v.normalize();

  double estimate = 0.0;
  bool converged = false;
  for (int it = 0; it < kPowerIterationCap; ++it) {
    const Vec av = apply(v);
    const double next = av.norm();
    Vec w = adjoint_apply(av);
    const double wn = w.norm();
    if (wn == 0.0) {
      estimate = next;
      converged = true;
      break;
    }
    const bool done = it > 0 && std::abs(next - estimate) <= tol * next;
    estimate = next;
    if (done) {
      converged = true;
      break;
    }
    v = w / wn;
  }
  if (!converged) {
    throw NonConvergenceError("op_norm: power iteration did not reach tolerance", estimate);
  }
  std::lock_guard<std::mutex> lock(impl_->norm_mutex);
  impl_->norm_value = estimate;
  impl_->norm_tol = tol;
  return estimate;
}

Mat LinearOperator::to_dense() const {
  if (impl_->kind == OperatorKind::kDense) return impl_->dense;
  Mat out(impl_->m, impl_->n);
  Vec e = Vec::Zero(impl_->n);
  for (long j = 0; j < impl_->n; ++j) {
    e[j] = 1.0;
    out.col(j) = apply(e);
    e[j] = 0.0;
  }
  return out;
}

const Mat* LinearOperator::dense_matrix() const {
  return impl_->kind == OperatorKind::kDense ? &impl_->dense : nullptr;
}

const std::vector<long>* LinearOperator::dct_rows() const {
  return impl_->kind == OperatorKind::kPartialDct ? &impl_->dct_rows : nullptr;
}

const std::vector<LinearOperator>* LinearOperator::blocks() const {
  return impl_->kind == OperatorKind::kHConcat ? &impl_->blocks : nullptr;
}

std::vector<long> LinearOperator::block_offsets() const {
  if (impl_->kind == OperatorKind::kHConcat) return impl_->offsets;
  return {0, impl_->n};
}

Vec apply(const LinearOperator& op, const Vec& x) { return op.apply(x); }
Vec adjoint_apply(const LinearOperator& op, const Vec& y) { return op.adjoint_apply(y); }
double op_norm(const LinearOperator& op, double tol) { return op.op_norm(tol); }

}  // namespace unipd::linops
