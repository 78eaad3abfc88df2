#ifndef UNIPD_LINOPS_HPP
#define UNIPD_LINOPS_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

namespace unipd {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace linops {

enum class OperatorKind { kDense, kPartialDct, kHConcat };

class OperatorImpl;

/// Linear map A: R^n -> R^m with an adjoint and a cached spectral-norm estimate.
///
/// Value type over shared immutable storage; copies are cheap and may be used
/// from several threads at once.
class LinearOperator {
 public:
  static LinearOperator dense(Mat matrix);
  static LinearOperator identity(long n);
  /// Rows `rows` (0-based, distinct) of the orthonormal DCT-II of length n.
  static LinearOperator partial_dct(long n, std::vector<long> rows);
  /// [A_1, ..., A_N]; all blocks must have the same row count.
  static LinearOperator hconcat(std::vector<LinearOperator> blocks);

  long rows() const;
  long cols() const;
  OperatorKind kind() const;

  Vec apply(const Vec& x) const;
  Vec adjoint_apply(const Vec& y) const;

  /// Spectral norm by power iteration on A^T A (fixed seed, at most 5000
  /// iterations). Throws NonConvergenceError carrying the last estimate.
  double op_norm(double tol = 1e-10) const;

  /// Materializes the operator column by column. Intended for small sizes.
  Mat to_dense() const;

  const Mat* dense_matrix() const;
  const std::vector<long>* dct_rows() const;
  const std::vector<LinearOperator>* blocks() const;
  /// Column offsets of each hconcat block (size N+1).
  std::vector<long> block_offsets() const;

 private:
  explicit LinearOperator(std::shared_ptr<const OperatorImpl> impl);
  std::shared_ptr<const OperatorImpl> impl_;
};

Vec apply(const LinearOperator& op, const Vec& x);
Vec adjoint_apply(const LinearOperator& op, const Vec& y);
double op_norm(const LinearOperator& op, double tol);

}  // namespace linops

using linops::LinearOperator;

}  // namespace unipd

#endif  // UNIPD_LINOPS_HPP
