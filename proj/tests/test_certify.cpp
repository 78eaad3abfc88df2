#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "unipd/errors.hpp"
#include "unipd/certify.hpp"

using namespace unipd;
using namespace unipd::solver;

namespace {

double min_eig(const Mat& P) {
  Eigen::SelfAdjointEigenSolver<Mat> es(P, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double log_unif(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(oracle::unif(rng, std::log(lo), std::log(hi)));
}

}  // namespace

TEST_CASE("t_func examples") {
  CHECK(t_func(1, 1) == 1.0);
  CHECK(t_func(2, 1) == doctest::Approx(4.0 / 3.0));
  CHECK(t_func(0, 5) == 5.0);
}

TEST_CASE("gamma weights of the presets") {
  // SOGDA: alpha = 0, mu = beta
  const auto sogda = SolverParams::from_preset(Preset::kSOGDA, 1, 1, 1);
  CHECK(gamma_w(sogda) == doctest::Approx(1.0 + 1.0 / 3.0));
  CHECK(gamma_y(sogda) == 0.0);
  // PDHG: |mu - beta| = 0
  CHECK(gamma_w(SolverParams::from_preset(Preset::kPDHG, 1, 1, 1)) == doctest::Approx(4.0 / 3.0));
  // GDA: mu - beta = 1, t(2, 2) = 2, gamma_y = 1 + 1 + 4
  const auto gda = SolverParams::from_preset(Preset::kGDA, 1, 1, 1);
  CHECK(gamma_w(gda) == 2.0);
  CHECK(gamma_y(gda) == 6.0);
  // CP: mu - beta = -1: gamma_y = 1 + 1 - 4
  CHECK(gamma_y(SolverParams::from_preset(Preset::kCP, 1, 1, 1)) == -2.0);
}

TEST_CASE("weight_c examples") {
  const auto pdhg = SolverParams::from_preset(Preset::kPDHG, 0.3, 0.7, 2.0);
  CHECK(weight_c(pdhg, 1.0, 2.0, Regime::kAffine) == 0.0);
  CHECK(weight_c(pdhg, 1.0, 2.0, Regime::kConic) == 0.0);

  const double tau = 0.1;
  const auto ogda = SolverParams::from_preset(Preset::kOGDA, tau, tau, 1.0);
  CHECK(weight_c(ogda, 0.0, 1.0, Regime::kAffine) == doctest::Approx(2.0 * tau));

  const auto sogda = SolverParams::from_preset(Preset::kSOGDA, 0.2, 0.05, 0.5);
  CHECK(weight_c(sogda, 3.0, 1.7, Regime::kConic) == doctest::Approx(0.05 / 0.5 + 1.7 * std::sqrt(0.05 * 0.2)));

  CHECK_THROWS_AS(weight_c(SolverParams::from_preset(Preset::kCP, 1, 1, 0.0), 1, 1, Regime::kConic), ParameterError);
}

TEST_CASE("certify_stepsizes examples") {
  const auto pdhg = SolverParams::from_preset(Preset::kPDHG, 1.0, 2.0, 1.0);
  CHECK(certify_stepsizes(pdhg, 0.0, 1.0, Regime::kAffine).certified);

  Mat A = Mat::Identity(2, 2);
  for (double sigma : {1e-6, 0.1, 1.0, 10.0}) {
    const auto p0 = SolverParams::from_preset(Preset::kPDHG, 1e-4, sigma, 0.0);
    const CertReport r = certify_stepsizes(p0, 0.0, 1.0, Regime::kAffine, &A);
    CHECK_FALSE(r.scalar_ok);
    CHECK(r.psd_checked);
    CHECK_FALSE(r.psd_ok);
    CHECK_FALSE(r.certified);
  }

  const auto cp = SolverParams::from_preset(Preset::kCP, 1.0, 1.0, 0.0);
  CHECK(certify_stepsizes(cp, 0.0, 1.0, Regime::kAffine).certified);
  CHECK_FALSE(certify_stepsizes(SolverParams::from_preset(Preset::kCP, 1.0 + 1e-9, 1.0, 0.0), 0.0, 1.0,
                                Regime::kAffine)
                  .certified);

  SolverParams cu;
  cu.tau = 0.1;
  cu.sigma = 0.1;
  cu.rho = 1.0;
  const CertReport r = certify_stepsizes(cu, 0.0, 1.0, Regime::kAffine);
  CHECK_FALSE(r.certified);
  CHECK(r.message == "scalar conditions unavailable; PSD check skipped");
  CHECK(certify_stepsizes(cu, 0.0, 1.0, Regime::kAffine, &A).certified);
  CHECK(parse_regime(regime_name(Regime::kConic)) == Regime::kConic);
}

TEST_CASE("scalar conditions imply the exact PSD condition (affine)") {
  std::mt19937_64 rng(1);
  int hits[5] = {0, 0, 0, 0, 0};
  const Preset presets[5] = {Preset::kSOGDA, Preset::kPDHG, Preset::kCP, Preset::kGDA, Preset::kOGDA};
  for (int t = 0; t < 4000; ++t) {
    const Mat A = oracle::randn_mat(rng, 3, 4);
    const double na = oracle::spectral_norm(A);
    const double L_f = oracle::unif(rng, 0, 1) < 0.3 ? 0.0 : log_unif(rng, 0.01, 10);
    const int i = t % 5;
    const auto sp = SolverParams::from_preset(presets[i], log_unif(rng, 1e-3, 1), log_unif(rng, 1e-3, 10),
                                              log_unif(rng, 1e-2, 10));
    if (!scalar_condition(sp, L_f, na, Regime::kAffine)) continue;
    ++hits[i];
    const double c = weight_c(sp, L_f, na, Regime::kAffine);
    CAPTURE(preset_name(presets[i]));
    CHECK(min_eig(assemble_pc(sp, L_f, na, A, c)) >= -1e-9);
  }
  for (int h : hits) CHECK(h > 20);
}

TEST_CASE("scalar conditions imply the exact PSD condition (conic)") {
  std::mt19937_64 rng(2);
  int hits = 0;
  const Preset presets[5] = {Preset::kSOGDA, Preset::kPDHG, Preset::kCP, Preset::kGDA, Preset::kOGDA};
  for (int t = 0; t < 4000; ++t) {
    const Mat A = oracle::randn_mat(rng, 3, 4);
    const double na = oracle::spectral_norm(A);
    const double L_f = oracle::unif(rng, 0, 1) < 0.3 ? 0.0 : log_unif(rng, 0.01, 10);
    const int i = t % 5;
    const auto sp = SolverParams::from_preset(presets[i], log_unif(rng, 1e-3, 1), log_unif(rng, 1e-3, 10),
                                              log_unif(rng, 1e-2, 10));
    if (!scalar_condition(sp, L_f, na, Regime::kConic)) continue;
    ++hits;
    const CertReport r = certify_stepsizes(sp, L_f, na, Regime::kConic, &A);
    CAPTURE(preset_name(presets[i]));
    CHECK(r.psd_ok);
  }
  CHECK(hits > 50);
}

TEST_CASE("PDHG at its affine boundary is PSD up to round-off") {
  std::mt19937_64 rng(3);
  const Mat A = oracle::randn_mat(rng, 4, 6);
  const double na = oracle::spectral_norm(A);
  const double rho = 0.7;
  const auto sp = SolverParams::from_preset(Preset::kPDHG, (1.0 - 1e-12) / (0.5 + rho * na * na), 2.0 * rho, rho);
  const CertReport r = certify_stepsizes(sp, 0.5, na, Regime::kAffine, &A);
  CHECK(r.scalar_ok);
  CHECK(r.min_eig >= -1e-10);
  CHECK(r.min_eig <= 1e-8);
}

TEST_CASE("auto_stepsizes") {
  const auto s = auto_stepsizes(Preset::kSOGDA, 1.0, 1.0, Regime::kAffine);
  CHECK(s.rho == doctest::Approx(0.25));
  CHECK(s.sigma == doctest::Approx(0.25));
  CHECK(s.tau == doctest::Approx(0.125));

  const auto l = auto_stepsizes(Preset::kLALM, 1.0, 1.0, Regime::kAffine);
  CHECK(l.rho == doctest::Approx(0.5));
  CHECK(l.sigma == doctest::Approx(0.5));
  CHECK(l.tau == doctest::Approx(0.5));

  AutoStepOptions o;
  o.rho = 1.0;
  const auto g = auto_stepsizes(Preset::kOGDA, 0.0, 1.0, Regime::kAffine, o);
  CHECK(g.tau == doctest::Approx(0.225).epsilon(1e-9));
  CHECK(g.sigma == doctest::Approx(0.225).epsilon(1e-9));

  for (Preset p : {Preset::kSOGDA, Preset::kPDHG, Preset::kCP, Preset::kGDA, Preset::kOGDA}) {
    for (Regime rg : {Regime::kAffine, Regime::kConic}) {
      for (double L_f : {0.0, 2.0}) {
        const auto sp = auto_stepsizes(p, L_f, 3.0, rg);
        CAPTURE(preset_name(p));
        CHECK(certify_stepsizes(sp, L_f, 3.0, rg).certified);
      }
    }
  }

  AutoStepOptions zero_rho;
  zero_rho.rho = 0.0;
  CHECK_THROWS_AS(auto_stepsizes(Preset::kPDHG, 0.0, 1.0, Regime::kAffine, zero_rho), ParameterError);
}
