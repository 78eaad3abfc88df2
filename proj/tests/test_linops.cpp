#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "unipd/errors.hpp"
#include "unipd/linops.hpp"

using namespace unipd;

namespace {

Mat eg1_matrix() {
  Mat A(3, 3);
  A << 1, 1, 1, 1, 1, 2, 1, 2, 2;
  return A;
}

void check_adjoint(const LinearOperator& op, std::mt19937_64& rng) {
  for (int t = 0; t < 100; ++t) {
    const Vec x = oracle::randn(rng, op.cols());
    const Vec y = oracle::randn(rng, op.rows());
    const double lhs = op.apply(x).dot(y);
    const double rhs = x.dot(op.adjoint_apply(y));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
  }
}

}  // namespace

TEST_CASE("dense apply examples") {
  const auto A = LinearOperator::dense(eg1_matrix());
  CHECK(A.apply(Vec::Zero(3)).isZero(0.0));
  Vec e1 = Vec::Zero(3);
  e1[0] = 1.0;
  CHECK(A.apply(e1).isApprox(Vec::Ones(3)));
  CHECK_THROWS_AS(A.apply(Vec::Zero(4)), DimensionError);
  CHECK_THROWS_AS(A.adjoint_apply(Vec::Zero(2)), DimensionError);
}

TEST_CASE("partial DCT matches the direct cosine-sum oracle") {
  const long n = 8;
  const auto op = LinearOperator::partial_dct(n, {1, 2, 3, 4});
  const Mat D = oracle::dct_matrix(n);
  Vec e1 = Vec::Zero(n);
  e1[0] = 1.0;
  const Vec got = op.apply(e1);
  for (long i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(D(1 + i, 0)).epsilon(1e-14));

  std::mt19937_64 rng(3);
  const std::vector<long> rows = {0, 5, 2, 7, 11, 13};
  const auto op16 = LinearOperator::partial_dct(16, rows);
  const Mat D16 = oracle::dct_matrix(16);
  Mat sub(rows.size(), 16);
  for (std::size_t i = 0; i < rows.size(); ++i) sub.row(i) = D16.row(rows[i]);
  const Vec x = oracle::randn(rng, 16);
  CHECK((op16.apply(x) - sub * x).norm() <= 1e-12);
  const Vec y = oracle::randn(rng, 6);
  CHECK((op16.adjoint_apply(y) - sub.transpose() * y).norm() <= 1e-12);
}

TEST_CASE("partial DCT rows are orthonormal and the norm is one") {
  for (long n : {8L, 33L, 64L}) {
    std::vector<long> rows;
    for (long k = 0; k < n; k += 3) rows.push_back(k);
    const auto op = LinearOperator::partial_dct(n, rows);
    const Mat M = op.to_dense();
    const Mat G = M * M.transpose();
    CHECK((G - Mat::Identity(G.rows(), G.cols())).norm() <= 1e-12);
    CHECK(op.op_norm(1e-10) == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK_THROWS_AS(LinearOperator::partial_dct(4, {1, 1}), ParameterError);
  CHECK_THROWS_AS(LinearOperator::partial_dct(4, {4}), DimensionError);
}

TEST_CASE("adjoint consistency for every operator kind") {
  std::mt19937_64 rng(11);
  check_adjoint(LinearOperator::dense(oracle::randn_mat(rng, 7, 12)), rng);
  check_adjoint(LinearOperator::partial_dct(20, {0, 3, 4, 9, 19}), rng);
  check_adjoint(LinearOperator::hconcat({LinearOperator::dense(oracle::randn_mat(rng, 5, 3)),
                                         LinearOperator::partial_dct(9, {0, 2, 4, 6, 8}),
                                         LinearOperator::identity(5)}),
                rng);
}

TEST_CASE("hconcat equals the concatenated dense matrix") {
  std::mt19937_64 rng(5);
  const Mat A1 = oracle::randn_mat(rng, 4, 3);
  const Mat A2 = oracle::randn_mat(rng, 4, 2);
  const auto op = LinearOperator::hconcat({LinearOperator::dense(A1), LinearOperator::dense(A2)});
  Mat full(4, 5);
  full << A1, A2;
  const Vec x = oracle::randn(rng, 5);
  CHECK((op.apply(x) - (A1 * x.head(3) + A2 * x.tail(2))).norm() <= 1e-12);
  const Vec y = oracle::randn(rng, 4);
  Vec expect(5);
  expect << A1.transpose() * y, A2.transpose() * y;
  CHECK((op.adjoint_apply(y) - expect).norm() <= 1e-12);
  CHECK((op.to_dense() - full).norm() == 0.0);
  CHECK(op.block_offsets() == std::vector<long>{0, 3, 5});
  CHECK_THROWS_AS(LinearOperator::hconcat({LinearOperator::dense(A1), LinearOperator::identity(3)}), DimensionError);
}

TEST_CASE("op_norm examples and bounds") {
  CHECK(LinearOperator::identity(6).op_norm(1e-12) == doctest::Approx(1.0).epsilon(1e-10));
  Mat D = Mat::Zero(2, 2);
  D(0, 0) = 3.0;
  D(1, 1) = 1.0;
  CHECK(LinearOperator::dense(D).op_norm(1e-12) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(LinearOperator::dense(Mat::Zero(3, 4)).op_norm() == 0.0);

  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    const Mat A = oracle::randn_mat(rng, 9, 14);
    const auto op = LinearOperator::dense(A);
    const double nrm = op.op_norm(1e-12);
    CHECK(nrm == doctest::Approx(oracle::spectral_norm(A)).epsilon(1e-8));
    CHECK(nrm <= A.norm() * (1.0 + 1e-12));
    for (int s = 0; s < 20; ++s) {
      const Vec x = oracle::randn(rng, 14);
      CHECK((A * x).norm() / x.norm() <= nrm * (1.0 + 1e-8));
    }
  }
  CHECK(apply(LinearOperator::identity(2), Vec::Ones(2)).isApprox(Vec::Ones(2)));
}

TEST_CASE("op_norm reports non-convergence with the last estimate") {
  // nearly equal top singular values: the estimate moves by ~1e-12 per step
  Mat D = Mat::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = 1.0 - 1e-6;
  const auto op = LinearOperator::dense(D);
  try {
    (void)op.op_norm(1e-15);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(e.best_estimate() >= 1.0 - 1e-6);
    CHECK(e.best_estimate() <= 1.0);
  }
  CHECK_THROWS_AS(op.op_norm(0.0), ParameterError);
}
