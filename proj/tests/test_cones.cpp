#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "unipd/errors.hpp"
#include "unipd/certify.hpp"
#include "unipd/cones.hpp"

using namespace unipd;
using namespace unipd::cones;

namespace {

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

Cone mixed() { return Cone::product({Cone::zero(2), Cone::nonpos(3), Cone::nonneg(2)}); }

/// Random point of K drawn independently of the projection code.
Vec sample_in_cone(const Cone& K, std::mt19937_64& rng) {
  Vec k = Vec::Zero(K.dim());
  for (const auto& b : K.blocks()) {
    for (long i = 0; i < b.dim; ++i) {
      const double a = std::abs(oracle::unif(rng, -2.0, 2.0));
      if (b.kind == ConeKind::kNonpos) k[b.offset + i] = -a;
      if (b.kind == ConeKind::kNonneg) k[b.offset + i] = a;
    }
  }
  return k;
}

}  // namespace

TEST_CASE("proj_cone examples") {
  const Vec u = v3(1, -2, 0);
  CHECK(proj_cone(Cone::zero(3), u).isZero(0.0));
  CHECK(proj_cone(Cone::nonpos(3), u) == v3(0, -2, 0));
  const Cone K = Cone::product({Cone::zero(1), Cone::nonpos(2)});
  CHECK(proj_cone(K, v3(5, 1, -1)) == v3(0, 0, -1));
  CHECK_THROWS_AS(proj_cone(K, Vec::Zero(2)), DimensionError);
}

TEST_CASE("cpos and cneg examples") {
  const Vec u = v3(1, -2, 0);
  CHECK(cpos(Cone::nonpos(3), u) == v3(1, 0, 0));
  CHECK(cneg(Cone::nonpos(3), u) == v3(0, 2, 0));
  Vec w(2);
  w << 3, -4;
  CHECK(cpos(Cone::zero(2), w) == w);
  CHECK(cneg(Cone::zero(2), w).isZero(0.0));
  CHECK(cpos(Cone::nonneg(3), u) == v3(0, -2, 0));
  CHECK(cneg(Cone::nonneg(3), u) == v3(-1, 0, 0));
}

TEST_CASE("proj_dual_cone examples and the variational oracle") {
  Vec u(2);
  u << 1, 2;
  CHECK(proj_dual_cone(Cone::zero(2), u) == u);
  CHECK(proj_dual_cone(Cone::nonpos(3), v3(1, -2, 0)) == v3(0, -2, 0));

  // K* = {y : <y, k> >= 0 for k in K}: check membership by sampling K and the
  // projection optimality <u - p, q - p> <= 0 against sampled dual points.
  std::mt19937_64 rng(8);
  const Cone K = mixed();
  for (int t = 0; t < 200; ++t) {
    const Vec x = oracle::randn(rng, K.dim());
    const Vec p = proj_dual_cone(K, x);
    for (int s = 0; s < 20; ++s) CHECK(p.dot(sample_in_cone(K, rng)) >= -1e-12);
    for (int s = 0; s < 20; ++s) {
      Vec q = proj_dual_cone(K, oracle::randn(rng, K.dim(), 3.0));
      CHECK((x - p).dot(q - p) <= 1e-10);
    }
    CHECK(dist_dual_cone(K, x) == doctest::Approx((x - p).norm()).epsilon(1e-14));
  }
}

TEST_CASE("Moreau decomposition, orthogonality, idempotence") {
  std::mt19937_64 rng(21);
  for (const Cone& K : {Cone::zero(5), Cone::nonpos(5), Cone::nonneg(5), mixed()}) {
    for (int t = 0; t < 500; ++t) {
      const Vec u = oracle::randn(rng, K.dim(), 2.0);
      const Vec cp = cpos(K, u);
      const Vec cn = cneg(K, u);
      CHECK((cp - cn - u).norm() <= 1e-14);
      CHECK(std::abs(cp.dot(cn)) <= 1e-14);
      CHECK(std::abs(u.squaredNorm() - cp.squaredNorm() - cn.squaredNorm()) <= 1e-10 * u.squaredNorm());
      const Vec p = proj_cone(K, u);
      CHECK((proj_cone(K, p) - p).norm() <= 1e-12);
      // firm nonexpansiveness of the cone projection
      const Vec u2 = oracle::randn(rng, K.dim(), 2.0);
      const Vec p2 = proj_cone(K, u2);
      CHECK((p - p2).squaredNorm() <= (p - p2).dot(u - u2) + 1e-12);
    }
  }
}

TEST_CASE("cpos is monotone under shifts into -K") {
  std::mt19937_64 rng(4);
  for (const Cone& K : {Cone::nonpos(6), Cone::nonneg(6), mixed()}) {
    for (int t = 0; t < 1000; ++t) {
      const Vec a = oracle::randn(rng, K.dim());
      const Vec b = -proj_cone(K, oracle::randn(rng, K.dim()));  // b in -K
      CHECK(cpos(K, a + b).norm() >= cpos(K, a).norm() - 1e-12);
    }
  }
}

TEST_CASE("product cones flatten and compare") {
  const Cone K = Cone::product({Cone::product({Cone::zero(1), Cone::nonpos(2)}), Cone::nonneg(1)});
  CHECK(K.dim() == 4);
  CHECK(K.blocks().size() == 3);
  CHECK_FALSE(K.is_zero());
  CHECK(Cone::product({Cone::zero(2), Cone::zero(3)}).is_zero());
  CHECK(K == Cone::product({Cone::zero(1), Cone::nonpos(2), Cone::nonneg(1)}));
  CHECK(parse_kind(kind_name(ConeKind::kNonneg)) == ConeKind::kNonneg);
  CHECK_THROWS(parse_kind("soc"));
}

TEST_CASE("algebra lemma with t(a, b)") {
  std::mt19937_64 rng(31);
  const Cone K = mixed();
  for (int trial = 0; trial < 3000; ++trial) {
    const Vec w = oracle::randn(rng, K.dim(), 2.0), w2 = oracle::randn(rng, K.dim(), 2.0);
    const double a = oracle::unif(rng, 0.0, 3.0), b = oracle::unif(rng, 0.0, 3.0);
    const double lhs = 2.0 * a * cpos(K, w).dot(cneg(K, w2)) + b * (cpos(K, w) - cpos(K, w2)).squaredNorm();
    CHECK(lhs <= solver::t_func(a, b) * (w - w2).squaredNorm() + 1e-10);

    const Vec v = oracle::randn(rng, K.dim()), v2 = oracle::randn(rng, K.dim());
    const Vec r = cpos(K, w) + v, r2 = cpos(K, w2) + v2;
    CHECK((r - r2).squaredNorm() <= (w + v - w2 - v2).squaredNorm() + (v - v2).squaredNorm() + 1e-10);
  }
}
