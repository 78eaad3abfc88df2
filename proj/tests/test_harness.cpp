#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "unipd/errors.hpp"
#include "unipd/harness/generators.hpp"
#include "unipd/harness/io.hpp"
#include "unipd/harness/metrics.hpp"
#include "unipd/harness/rate_fit.hpp"
#include "unipd/harness/reference.hpp"
#include "unipd/certify.hpp"
#include "unipd/solver.hpp"

using namespace unipd;
using namespace unipd::harness;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "unipd_test_harness";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<Instance> sample_instances() {
  std::vector<Instance> out;
  out.push_back(gen_bp(40, 15, 4, Ensemble::kGaussian, 0.0, 3));
  out.push_back(gen_bp(64, 20, 5, Ensemble::kPartialDct, 20.0, 3));
  out.push_back(gen_l1l1(out.back(), 0.5));
  out.push_back(gen_lp(30, 8, 5, 3));
  out.push_back(gen_qp(12, 5, 3));
  out.push_back(gen_composite(20, 8, 3, false, 3));
  out.push_back(gen_composite(20, 8, 3, true, 3));
  out.push_back(gen_counterexample(2).conic);
  return out;
}

}  // namespace

TEST_CASE("generators are deterministic; UNIPD_SEED overrides the default") {
  CHECK(problem_to_json(gen_lp(20, 5, 4, 9)) == problem_to_json(gen_lp(20, 5, 4, 9)));
  CHECK(problem_to_json(gen_lp(20, 5, 4, 9)) != problem_to_json(gen_lp(20, 5, 4, 10)));
  CHECK(problem_to_json(gen_bp(30, 10, 3, Ensemble::kPartialDct, 40.0, 1)) ==
        problem_to_json(gen_bp(30, 10, 3, Ensemble::kPartialDct, 40.0, 1)));

  ::unsetenv("UNIPD_SEED");
  CHECK(resolve_seed(17) == 17);
  ::setenv("UNIPD_SEED", "123", 1);
  CHECK(resolve_seed(17) == 123);
  ::unsetenv("UNIPD_SEED");
  CHECK(parse_ensemble("dct") == Ensemble::kPartialDct);
  CHECK(parse_ensemble("gaussian") == Ensemble::kGaussian);
  CHECK_THROWS(parse_ensemble("bernoulli"));
}

TEST_CASE("problem JSON round trip is byte-identical") {
  for (const Instance& inst : sample_instances()) {
    const std::string a = problem_to_json(inst);
    const Instance back = problem_from_json(a);
    CHECK(problem_to_json(back) == a);
    CHECK(back.family == inst.family);
    CHECK(back.problem.K == inst.problem.K);
    CHECK(back.problem.b == inst.problem.b);
    const Vec x = Vec::LinSpaced(inst.problem.n(), -1.0, 1.0);
    CHECK(back.problem.A.apply(x) == inst.problem.A.apply(x));
  }
  const auto path = scratch("lp.json");
  const Instance lp = gen_lp(10, 3, 2, 1);
  write_problem_file(path.string(), lp);
  CHECK(problem_to_json(read_problem_file(path.string())) == problem_to_json(lp));
  CHECK_THROWS(problem_from_json("{\"f\": 1}"));
}

TEST_CASE("trace CSV round trip") {
  solver::Trace t(3);
  t[0].iter = 0;
  t[0].obj_gap = 0.1;
  t[1].iter = 10;
  t[1].pinf = 1.0 / 3.0;
  t[1].potential = 2.5e-300;
  t[2].iter = 20;
  t[2].kkt_res = 7.0;
  t[2].wall_ms = 1.25;
  const auto path = scratch("trace.csv");
  write_trace_csv(path.string(), t);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "iter,obj_gap,pinf,rel_err,kkt_res,potential,wall_ms");
  const solver::Trace r = read_trace_csv(path.string());
  REQUIRE(r.size() == 3);
  CHECK(*r[1].pinf == 1.0 / 3.0);
  CHECK(*r[1].potential == 2.5e-300);
  CHECK_FALSE(r[1].obj_gap.has_value());
  CHECK(r[2].wall_ms == 1.25);
}

TEST_CASE("planted LP: strong duality, feasibility, KKT") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Instance lp = gen_lp(60, 20, 10, seed);
    const ConicProblem& p = lp.problem;
    REQUIRE(lp.ref.has_value());
    REQUIRE(lp.ref->y_star.has_value());
    const Vec& x = lp.ref->x_star;
    const Vec& y = *lp.ref->y_star;
    const Vec r = std::get<alm::LinearSmooth>(p.f.term()).r;
    const auto& box = std::get<prox::BoxFn>(p.h.fn());

    // dual function of min r'x s.t. Mx - b in K, l <= x <= u, with y in K*
    const Vec v = r - p.A.adjoint_apply(y);
    double dual = p.b.dot(y);
    for (long i = 0; i < v.size(); ++i) dual += v[i] >= 0 ? v[i] * box.lower[i] : v[i] * box.upper[i];
    CHECK(std::abs(dual - r.dot(x)) <= 1e-10 * (1.0 + std::abs(dual)));
    CHECK(std::abs(lp_dual_objective(lp) - r.dot(x)) <= 1e-10 * (1.0 + std::abs(dual)));
    CHECK(cones::dist_dual_cone(p.K, y) == 0.0);
    CHECK(lp.ref->phi_star == doctest::Approx(r.dot(x)).epsilon(1e-14));

    CHECK(kkt_residual(p, x, y) <= 1e-9);
    const MetricsRow row = compute_metrics(lp, x, y);
    CHECK(*row.obj_gap == 0.0);
    CHECK(*row.pinf <= 1e-10);
    CHECK(*row.rel_err == 0.0);
  }
  const Instance eq_only = gen_lp(20, 0, 6, 4);
  CHECK(eq_only.problem.K.is_zero());
  CHECK(kkt_residual(eq_only.problem, eq_only.ref->x_star, *eq_only.ref->y_star) <= 1e-9);
}

TEST_CASE("planted QP and composite instances satisfy KKT") {
  for (const Instance& inst : {gen_qp(50, 20, 1), gen_composite(40, 15, 5, false, 2), gen_composite(40, 15, 5, true, 3)}) {
    REQUIRE(inst.ref->y_star.has_value());
    CHECK(kkt_residual(inst.problem, inst.ref->x_star, *inst.ref->y_star) <= 1e-9);
    CHECK(inst.ref->phi_star == doctest::Approx(alm::eval_phi(inst.problem, inst.ref->x_star)).epsilon(1e-14));
    const MetricsRow row = compute_metrics(inst, inst.ref->x_star, inst.ref->y_star);
    CHECK(*row.obj_gap <= 1e-12);
    CHECK(*row.pinf <= 1e-9);
  }
}

TEST_CASE("BP generator") {
  const Instance z = gen_bp(30, 10, 0, Ensemble::kGaussian, 0.0, 1);
  CHECK(z.ref->x_star.isZero(0.0));
  CHECK(z.problem.b.isZero(0.0));
  CHECK(z.ref->phi_star == 0.0);

  const Instance d = gen_bp(256, 64, 10, Ensemble::kPartialDct, 40.0, 2);
  long nnz = 0;
  for (long i = 0; i < 256; ++i) {
    const double a = std::abs(d.ref->x_star[i]);
    if (a == 0.0) continue;
    ++nnz;
    CHECK(a >= 1.0);
    CHECK(a <= 100.0);
  }
  CHECK(nnz == 10);
  CHECK((d.problem.A.apply(d.ref->x_star) - d.problem.b).norm() <= 1e-12);
  CHECK(d.problem.A.op_norm() == doctest::Approx(1.0).epsilon(1e-8));

  CHECK_THROWS_AS(gen_bp(10, 20, 1, Ensemble::kGaussian, 0.0, 1), ParameterError);
  CHECK_THROWS_AS(gen_bp(100000, 5000, 1, Ensemble::kGaussian, 0.0, 1), ParameterError);
}

TEST_CASE("large partial DCT BP instance (262144 x 32768) is accepted") {
  const Instance big = gen_bp(262144, 32768, 5553, Ensemble::kPartialDct, 20.0, 5);
  CHECK(big.problem.m() == 32768);
  CHECK(big.problem.n() == 262144);
  long nnz = 0;
  for (long i = 0; i < big.ref->x_star.size(); ++i) nnz += big.ref->x_star[i] != 0.0;
  CHECK(nnz == 5553);
}

TEST_CASE("desk BP: the planted x* is the unique l1 minimizer") {
  const Instance bp = gen_bp(200, 60, 12, Ensemble::kGaussian, 0.0, 1);
  const ConicProblem& p = bp.problem;
  const Vec& xs = bp.ref->x_star;
  const Mat A = p.A.to_dense();
  const double na = p.A.op_norm();
  std::mt19937_64 rng(5);

  // tight solves from scattered starts all land on x*
  const auto sp = solver::auto_stepsizes(solver::Preset::kCP, 0.0, na, solver::Regime::kAffine);
  for (int trial = 0; trial < 3; ++trial) {
    solver::SolveOptions opts;
    opts.stopping.max_iter = 200000;
    opts.stopping.record_interval = 100;
    opts.stopping.converged = [](const solver::TraceRow& r) { return *r.rel_err <= 1e-9; };
    opts.diagnostics.metrics = make_metrics_hook(bp, EvalPoint::kLast);
    const auto res = solver::solve(p, sp, oracle::randn(rng, 200, 3.0), opts);
    CAPTURE(trial);
    CHECK(res.converged);
  }

  // feasible perturbations along ker A strictly increase the l1 norm
  const Eigen::FullPivLU<Mat> lu(A);
  const Mat N = lu.kernel();
  REQUIRE(N.cols() == 140);
  const double base = xs.lpNorm<1>();
  for (int t = 0; t < 2000; ++t) {
    const Vec d = N * oracle::randn(rng, N.cols());
    for (double eps : {1e-6, 1e-3}) CHECK((xs + eps * d / d.norm()).lpNorm<1>() > base);
  }
}

TEST_CASE("L1L1 lift") {
  const Instance bp = gen_bp(50, 20, 4, Ensemble::kPartialDct, 20.0, 6);
  const Instance l = gen_l1l1(bp, 0.3);
  CHECK(l.problem.n() == 70);
  std::mt19937_64 rng(1);
  const Vec x = oracle::randn(rng, 50);
  Vec z(70);
  z << x, bp.problem.b - bp.problem.A.apply(x);
  CHECK((l.problem.A.apply(z) - l.problem.b).norm() <= 1e-12);
  CHECK(alm::eval_phi(l.problem, z) == doctest::Approx(0.3 * x.lpNorm<1>() + z.tail(20).lpNorm<1>()));
  const Vec w = oracle::randn(rng, 70);
  const double expect = (bp.problem.A.apply(w.head(50)) - bp.problem.b + w.tail(20)).norm() / bp.problem.b.norm();
  CHECK(pinf(l, w) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(gen_l1l1(bp, 0.0), ParameterError);
}

TEST_CASE("L1L1 reference from a cached CP run") {
  const Instance l = gen_l1l1(gen_bp(30, 12, 3, Ensemble::kPartialDct, 20.0, 8), 0.2);
  const auto cache = scratch("ref_cache.json");
  std::filesystem::remove(cache);
  ReferenceRunOptions o;
  o.kkt_tol = 1e-9;
  o.cache_path = cache.string();
  const ReferenceSolution r1 = compute_reference(l, o);
  REQUIRE(r1.y_star.has_value());
  CHECK(kkt_residual(l.problem, r1.x_star, *r1.y_star) <= 1e-9);
  CHECK(std::filesystem::exists(cache));
  const ReferenceSolution r2 = compute_reference(l, o);
  CHECK(r2.x_star == r1.x_star);
  CHECK(r2.phi_star == r1.phi_star);
}

TEST_CASE("counterexamples") {
  const auto e1 = gen_counterexample(1);
  const Mat A1 = e1.conic.problem.A.to_dense();
  Mat expect(3, 3);
  expect << 1, 1, 1, 1, 1, 2, 1, 2, 2;
  CHECK(A1 == expect);
  CHECK(std::abs(A1.determinant()) > 0.5);
  CHECK(e1.conic.ref->x_star.isZero(0.0));

  // example 2: min 0.5 x1^2 s.t. A x = 0; x* = 0 iff the nullspace direction has x1 != 0
  const auto e2 = gen_counterexample(2);
  const Mat A2 = e2.conic.problem.A.to_dense();
  Eigen::FullPivLU<Mat> lu(A2);
  CHECK(lu.rank() == 3);
  const Mat N = lu.kernel();
  REQUIRE(N.cols() == 1);
  CHECK(std::abs(N(0, 0)) > 1e-8);
  CHECK(kkt_residual(e2.conic.problem, Vec::Zero(4), Vec::Zero(3)) == 0.0);
  CHECK_THROWS(gen_counterexample(3));
}

TEST_CASE("metrics") {
  const Instance bp = gen_bp(30, 10, 3, Ensemble::kGaussian, 0.0, 2);
  const Vec& xs = bp.ref->x_star;
  CHECK(rel_err(bp, xs) == 0.0);
  CHECK(obj_gap(bp, xs) == 0.0);
  CHECK(pinf(bp, xs) <= 1e-14);
  const Vec x2 = 2.0 * xs;
  CHECK(rel_err(bp, x2) == doctest::Approx(xs.norm() / std::max(1.0, xs.norm())));
  CHECK(pinf(bp, x2) == doctest::Approx(1.0));

  // zero right-hand side: absolute residual
  const auto e1 = gen_counterexample(1);
  const Vec x = Vec::Ones(3);
  CHECK(pinf(e1.conic, x) == doctest::Approx((e1.conic.problem.A.apply(x)).norm()));

  // kkt_res on an l1 instance against interval arithmetic on the subdifferential
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    Vec xx = oracle::randn(rng, 30);
    for (long i = 0; i < 30; i += 3) xx[i] = 0.0;
    const Vec y = oracle::randn(rng, 10);
    const Vec g = bp.problem.A.adjoint_apply(y);
    double acc = 0.0;
    for (long i = 0; i < 30; ++i) {
      const double d = xx[i] == 0.0 ? oracle::interval_dist(g[i], -1, 1) : std::abs(g[i] - (xx[i] > 0 ? 1.0 : -1.0));
      acc += d * d;
    }
    const double expect = (bp.problem.A.apply(xx) - bp.problem.b).norm() + std::sqrt(acc);
    CHECK(kkt_residual(bp.problem, xx, y) == doctest::Approx(expect).epsilon(1e-12));
  }

  Instance lp = gen_lp(10, 3, 2, 2);
  Vec out = lp.ref->x_star;
  out[0] = 1e6;
  CHECK(std::isinf(kkt_residual(lp.problem, out, *lp.ref->y_star)));
}

TEST_CASE("fit_rate analytic cases") {
  std::vector<double> it, v, lin;
  for (int k = 1; k <= 50; ++k) {
    it.push_back(10.0 * k);
    v.push_back(1.0 / (10.0 * k));
    lin.push_back(std::pow(2.0, -10.0 * k / 10.0));
  }
  const RateFit s = fit_rate(it, v, FitMode::kSublinear);
  CHECK(s.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(s.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.points == 50);
  std::vector<double> ks;
  for (int k = 1; k <= 50; ++k) ks.push_back(k);
  std::vector<double> geo;
  for (int k = 1; k <= 50; ++k) geo.push_back(std::pow(2.0, -k));
  CHECK(fit_rate(ks, geo, FitMode::kLinear).slope == doctest::Approx(-std::log(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(fit_rate(std::vector<double>(5, 1.0), std::vector<double>(5, 1.0), FitMode::kLinear), ParameterError);
  std::vector<double> bad = v;
  bad[3] = 0.0;
  CHECK_THROWS_AS(fit_rate(it, bad, FitMode::kSublinear), DomainError);

  solver::Trace t;
  for (int k = 0; k <= 100; ++k) {
    solver::TraceRow r;
    r.iter = k * 10;
    if (k > 0) r.obj_gap = 3.0 / (k * 10.0);
    t.push_back(r);
  }
  const RateFit w = fit_rate(t, Column::kObjGap, FitMode::kSublinear, 100, 1000);
  CHECK(w.points == 91);
  CHECK(w.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(parse_column(column_name(Column::kKktRes)) == Column::kKktRes);
}

TEST_CASE("summary JSON") {
  RunSummary s;
  s.run_id = "cp_0";
  s.params = solver::SolverParams::from_preset(solver::Preset::kCP, 0.1, 0.2, 0.3);
  s.final_metrics.iter = 100;
  s.final_metrics.obj_gap = 1e-3;
  s.slope_fits["obj_gap"] = RateFit{-1.0, 0.5, 0.99, 20};
  s.certified = true;
  const auto j = nlohmann::json::parse(summary_to_json(s));
  CHECK(j.at("run_id") == "cp_0");
  CHECK(j.at("certified") == true);
  CHECK(j.at("slope_fits").contains("obj_gap"));
}
