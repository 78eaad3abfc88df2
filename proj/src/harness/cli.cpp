#include "unipd/harness/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "unipd/baselines.hpp"
#include "unipd/certify.hpp"
#include "unipd/harness/generators.hpp"
#include "unipd/harness/io.hpp"
#include "unipd/harness/metrics.hpp"
#include "unipd/harness/rate_fit.hpp"
#include "unipd/harness/reference.hpp"

namespace unipd::harness {

namespace {

using solver::Preset;
using solver::Regime;
using solver::SolverParams;

struct GenSpec {
  std::string problem_path;
  std::string gen;
  long n = 512;
  long m = 128;
  long k = 25;
  long m1 = 20;
  long m2 = 10;
  std::string ensemble = "gaussian";
  double db = 20.0;
  double zeta = 1.0;
  bool quadratic = false;
  std::uint64_t seed = 1;
  std::string ref_cache;
  long ref_iters = 1000000;
};

void add_gen_options(CLI::App* app, GenSpec& g) {
  app->add_option("--problem", g.problem_path, "problem JSON file");
  app->add_option("--gen", g.gen, "generator: bp, l1l1, lp, qp, composite, eg1, eg2");
  app->add_option("--n", g.n, "number of variables");
  app->add_option("--m", g.m, "number of rows (bp, l1l1, qp, composite)");
  app->add_option("--k", g.k, "sparsity (bp, l1l1, composite)");
  app->add_option("--m1", g.m1, "LP inequality rows");
  app->add_option("--m2", g.m2, "LP equality rows");
  app->add_option("--ensemble", g.ensemble, "gaussian or partial-dct");
  app->add_option("--db", g.db, "dynamic range in dB (partial-dct)");
  app->add_option("--zeta", g.zeta, "L1L1 weight");
  app->add_flag("--quadratic", g.quadratic, "composite: add a PSD quadratic");
  app->add_option("--seed", g.seed, "generator seed (UNIPD_SEED overrides)");
  app->add_option("--ref-cache", g.ref_cache, "cache file for numerical references");
  app->add_option("--ref-iters", g.ref_iters, "iteration cap for numerical references");
}

Instance build_instance(const GenSpec& g) {
  if (!g.problem_path.empty()) return read_problem_file(g.problem_path);
  const std::uint64_t seed = resolve_seed(g.seed);
  if (g.gen == "bp") return gen_bp(g.n, g.m, g.k, parse_ensemble(g.ensemble), g.db, seed);
  if (g.gen == "l1l1") {
    Instance inst = gen_l1l1(gen_bp(g.n, g.m, g.k, parse_ensemble(g.ensemble), g.db, seed), g.zeta);
    ReferenceRunOptions ro;
    ro.max_iter = g.ref_iters;
    ro.cache_path = g.ref_cache;
    inst.ref = compute_reference(inst, ro);
    return inst;
  }
  if (g.gen == "lp") return gen_lp(g.n, g.m1, g.m2, seed);
  if (g.gen == "qp") return gen_qp(g.n, g.m, seed);
  if (g.gen == "composite") return gen_composite(g.n, g.m, g.k, g.quadratic, seed);
  if (g.gen == "eg1") return gen_counterexample(1).conic;
  if (g.gen == "eg2") return gen_counterexample(2).conic;
  if (g.gen.empty()) throw ConfigurationError("give --problem or --gen");
  throw ConfigurationError("unknown generator '" + g.gen + "'");
}

struct StepSpec {
  std::string preset = "sogda";
  std::optional<double> tau;
  std::optional<double> sigma;
  std::string rho = "auto";
  double alpha = 0.0;
  double beta = 0.0;
  double mu = 0.0;
  std::string dual_mode = "implicit";
};

void add_step_options(CLI::App* app, StepSpec& s) {
  app->add_option("--preset", s.preset, "sogda, pdhg, cp, gda, ogda, lalm, custom");
  app->add_option("--tau", s.tau, "primal step");
  app->add_option("--sigma", s.sigma, "dual step");
  app->add_option("--rho", s.rho, "penalty or 'auto'");
  app->add_option("--alpha", s.alpha, "custom: primal extrapolation");
  app->add_option("--beta", s.beta, "custom: dual extrapolation");
  app->add_option("--mu", s.mu, "custom: Jacobian weight");
  app->add_option("--dual-mode", s.dual_mode, "implicit or explicit");
}

std::optional<double> parse_rho(const std::string& text) {
  if (text == "auto") return std::nullopt;
  std::size_t pos = 0;
  const double v = std::stod(text, &pos);
  if (pos != text.size()) throw ConfigurationError("--rho must be a number or 'auto'");
  return v;
}

SolverParams build_params(const StepSpec& s, const ConicProblem& p) {
  const Preset preset = solver::parse_preset(s.preset);
  const std::optional<double> rho = parse_rho(s.rho);
  SolverParams prm;
  if (preset == Preset::kCustom || (s.tau && s.sigma)) {
    if (!s.tau || !s.sigma) throw ConfigurationError("custom preset needs --tau and --sigma");
    prm.tau = *s.tau;
    prm.sigma = *s.sigma;
    prm.rho = rho.value_or(0.0);
    prm.preset = preset;
    if (preset == Preset::kCustom) {
      prm.alpha = s.alpha;
      prm.beta = s.beta;
      prm.mu = s.mu;
    } else {
      prm = SolverParams::from_preset(preset, prm.tau, prm.sigma, prm.rho);
    }
  } else {
    const double rho_eff = rho.value_or(0.0);
    const Regime regime = (p.K.is_zero() || (rho && rho_eff == 0.0)) ? Regime::kAffine : Regime::kConic;
    solver::AutoStepOptions ao;
    ao.rho = rho;
    prm = solver::auto_stepsizes(preset, p.f.lipschitz(), p.A.op_norm(1e-9), regime, ao);
  }
  if (s.dual_mode == "explicit") {
    prm.dual_mode = solver::DualUpdateMode::kExplicit;
  } else if (s.dual_mode != "implicit") {
    throw ConfigurationError("--dual-mode must be implicit or explicit");
  }
  prm.validate();
  return prm;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string opt_fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string("-"); }

bool certified_for(const SolverParams& prm, const ConicProblem& p) {
  const Regime regime = (p.K.is_zero() || prm.rho == 0.0) ? Regime::kAffine : Regime::kConic;
  const Mat* dense = nullptr;
  Mat storage;
  if (prm.preset == Preset::kCustom && p.n() + 2 * p.m() <= solver::kPsdMaxSize) {
    storage = p.A.to_dense();
    dense = &storage;
  }
  return solver::certify_stepsizes(prm, p.f.lipschitz(), p.A.op_norm(1e-9), regime, dense).certified;
}

std::map<std::string, RateFit> try_fits(const solver::Trace& trace) {
  std::map<std::string, RateFit> fits;
  if (trace.empty()) return fits;
  const long last = trace.back().iter;
  for (Column c : {Column::kObjGap, Column::kPinf, Column::kRelErr, Column::kKktRes}) {
    try {
      fits[column_name(c)] = fit_rate(trace, c, FitMode::kSublinear, std::max<long>(1, last / 100), last);
    } catch (const Error&) {
    }
  }
  return fits;
}

int run_solve(const GenSpec& g, const StepSpec& s, long iters, long record, const std::string& point,
              const std::string& out_csv, const std::string& summary_path, const std::string& write_problem,
              bool force, std::ostream& out, std::ostream& err) {
  const Instance inst = build_instance(g);
  if (!write_problem.empty()) write_problem_file(write_problem, inst);
  const SolverParams prm = build_params(s, inst.problem);
  const bool certified = certified_for(prm, inst.problem);

  solver::SolveOptions so;
  so.stopping.max_iter = iters;
  so.stopping.record_interval = record;
  so.force = force;
  if (point != "last" && point != "ergodic") throw ConfigurationError("--point must be last or ergodic");
  so.diagnostics.metrics = make_metrics_hook(inst, point == "ergodic" ? EvalPoint::kErgodic : EvalPoint::kLast);

  out << "params: preset=" << solver::preset_name(prm.preset) << " tau=" << fmt(prm.tau)
      << " sigma=" << fmt(prm.sigma) << " rho=" << fmt(prm.rho) << " alpha=" << fmt(prm.alpha)
      << " beta=" << fmt(prm.beta) << " mu=" << fmt(prm.mu) << (certified ? " (certified)" : " (NOT certified)")
      << "\n";

  solver::SolveResult res;
  try {
    res = solver::solve(inst.problem, prm, Vec::Zero(inst.problem.n()), so);
  } catch (const solver::DivergenceError& e) {
    if (!out_csv.empty()) write_trace_csv(out_csv, e.partial_trace());
    err << "diverged: " << e.what() << "\n";
    return kExitDiverged;
  }
  if (!out_csv.empty()) write_trace_csv(out_csv, res.trace);
  const auto& last = res.trace.back();
  out << "iterations: " << res.iterations << "\n"
      << "obj_gap: " << opt_fmt(last.obj_gap) << "  pinf: " << opt_fmt(last.pinf)
      << "  rel_err: " << opt_fmt(last.rel_err) << "  kkt_res: " << opt_fmt(last.kkt_res) << "\n";
  if (!summary_path.empty()) {
    RunSummary sum;
    sum.run_id = solver::preset_name(prm.preset) + "-" + std::to_string(resolve_seed(g.seed));
    sum.params = prm;
    sum.final_metrics = last;
    sum.slope_fits = try_fits(res.trace);
    sum.certified = certified;
    write_summary_file(summary_path, sum);
  }
  return kExitOk;
}

int run_certify(const StepSpec& s, double L_f, double normA, const std::string& regime_name,
                const std::string& problem_path, std::ostream& out) {
  if (!s.tau || !s.sigma) throw ConfigurationError("certify needs --tau and --sigma");
  const Preset preset = solver::parse_preset(s.preset);
  const std::optional<double> rho = parse_rho(s.rho);
  if (!rho) throw ConfigurationError("certify needs a numeric --rho");
  SolverParams prm;
  if (preset == Preset::kCustom) {
    prm.tau = *s.tau;
    prm.sigma = *s.sigma;
    prm.rho = *rho;
    prm.alpha = s.alpha;
    prm.beta = s.beta;
    prm.mu = s.mu;
  } else {
    prm = SolverParams::from_preset(preset, *s.tau, *s.sigma, *rho);
  }
  std::optional<Mat> dense;
  if (!problem_path.empty()) {
    const Instance inst = read_problem_file(problem_path);
    dense = inst.problem.A.to_dense();
    L_f = inst.problem.f.lipschitz();
    normA = inst.problem.A.op_norm(1e-9);
  }
  const auto report =
      solver::certify_stepsizes(prm, L_f, normA, solver::parse_regime(regime_name), dense ? &*dense : nullptr);
  out << (report.certified ? "CERTIFIED" : "NOT CERTIFIED") << "\n"
      << "regime: " << solver::regime_name(report.regime) << "\n"
      << "c: " << fmt(report.c) << "\n"
      << report.message << "\n";
  if (report.min_eig_shifted) out << "min eigenvalue with c Lambda^-1 shift: " << fmt(*report.min_eig_shifted) << "\n";
  return kExitOk;
}

int run_bench(const std::string& config_path, const std::string& outdir, std::ostream& out) {
  std::ifstream in(config_path);
  if (!in) throw ConfigurationError("cannot open bench config '" + config_path + "'");
  const nlohmann::json cfg = nlohmann::json::parse(in);

  GenSpec g;
  const auto& pj = cfg.at("problem");
  g.problem_path = pj.value("file", std::string());
  g.gen = pj.value("gen", std::string());
  g.n = pj.value("n", g.n);
  g.m = pj.value("m", g.m);
  g.k = pj.value("k", g.k);
  g.m1 = pj.value("m1", g.m1);
  g.m2 = pj.value("m2", g.m2);
  g.ensemble = pj.value("ensemble", g.ensemble);
  g.db = pj.value("db", g.db);
  g.zeta = pj.value("zeta", g.zeta);
  g.seed = pj.value("seed", g.seed);
  const Instance inst = build_instance(g);
  const ConicProblem& p = inst.problem;

  const auto presets = cfg.at("presets").get<std::vector<std::string>>();
  const auto taus = cfg.at("tau").get<std::vector<double>>();
  const auto sigmas = cfg.at("sigma").get<std::vector<double>>();
  const auto rhos = cfg.at("rho").get<std::vector<double>>();
  const long iters = cfg.value("iters", 1000L);
  const long record = cfg.value("record_interval", 10L);
  const bool force = cfg.value("force", false);
  const EvalPoint point = cfg.value("point", std::string("last")) == "ergodic" ? EvalPoint::kErgodic : EvalPoint::kLast;

  std::filesystem::create_directories(outdir);
  nlohmann::json all = nlohmann::json::array();
  long ran = 0, skipped = 0, diverged = 0;
  for (const auto& name : presets) {
    const Preset preset = solver::parse_preset(name);
    for (double rho : rhos) {
      for (double tau : taus) {
        for (double sigma : sigmas) {
          SolverParams prm;
          try {
            prm = SolverParams::from_preset(preset, tau, sigma, rho);
          } catch (const ParameterError&) {
            ++skipped;
            continue;
          }
          const bool certified = certified_for(prm, p);
          if (!certified && !force) {
            ++skipped;
            continue;
          }
          std::ostringstream id;
          id << name << "_tau" << tau << "_sigma" << sigma << "_rho" << rho;
          solver::SolveOptions so;
          so.stopping.max_iter = iters;
          so.stopping.record_interval = record;
          so.force = true;
          so.diagnostics.metrics = make_metrics_hook(inst, point);
          RunSummary sum;
          sum.run_id = id.str();
          sum.params = prm;
          sum.certified = certified;
          solver::Trace trace;
          try {
            trace = solver::solve(p, prm, Vec::Zero(p.n()), so).trace;
          } catch (const solver::DivergenceError& e) {
            trace = e.partial_trace();
            ++diverged;
          } catch (const ConfigurationError&) {
            ++skipped;
            continue;
          }
          ++ran;
          write_trace_csv((std::filesystem::path(outdir) / (sum.run_id + ".csv")).string(), trace);
          if (!trace.empty()) sum.final_metrics = trace.back();
          sum.slope_fits = try_fits(trace);
          all.push_back(nlohmann::json::parse(summary_to_json(sum)));
        }
      }
    }
  }
  std::ofstream sj(std::filesystem::path(outdir) / "summary.json");
  sj << all.dump(2) << "\n";
  out << "bench: " << ran << " runs (" << diverged << " diverged), " << skipped << " cells skipped\n";
  return kExitOk;
}

double norm_after(const ConicProblem& p, Preset preset, const Vec& x0, long iters) {
  const double L_f = p.f.lipschitz();
  const auto prm = solver::auto_stepsizes(preset, L_f, p.A.op_norm(1e-9), Regime::kAffine);
  solver::SolveOptions so;
  so.stopping.max_iter = iters;
  so.stopping.record_interval = iters;
  return solver::solve(p, prm, x0, so).state.x.norm();
}

int run_compare_example(int which, long iters, std::uint64_t seed, std::ostream& out) {
  const Counterexample ce = gen_counterexample(which);
  std::mt19937_64 rng(resolve_seed(seed));
  std::normal_distribution<double> nd;
  Vec x0(ce.blocks.n());
  for (long i = 0; i < x0.size(); ++i) x0[i] = nd(rng);

  const baselines::AdmmSolver admm(ce.blocks);
  auto st = baselines::admm_init(ce.blocks, x0);
  for (long k = 0; k < iters && st.x.allFinite(); ++k) st = admm.step(st);
  out << "example " << which << ", " << iters << " iterations, ||x0|| = " << fmt(x0.norm()) << "\n";
  out << "  multi-block ADMM (rho = 1): ||x|| = " << fmt(st.x.norm()) << "\n";
  for (Preset preset : {Preset::kSOGDA, Preset::kCP}) {
    out << "  " << solver::preset_name(preset) << "-AL: ||x|| = " << fmt(norm_after(ce.conic.problem, preset, x0, iters))
        << "\n";
  }
  return kExitOk;
}

int run_compare_bp(const GenSpec& g, int blocks, long iters, double rho1, double rho2, double target,
                   std::ostream& out) {
  const Instance inst = build_instance(g);
  const Mat A = inst.problem.A.to_dense();
  const Vec& xs = inst.ref->x_star;
  const auto bp = baselines::make_l1_blocks(A, inst.problem.b, blocks, rho1, rho2);
  solver::StoppingRule stop;
  stop.max_iter = iters;
  stop.record_interval = 10;
  stop.converged = [target](const solver::TraceRow& r) { return r.rel_err && *r.rel_err <= target; };
  const auto ar = baselines::admm_solve(bp, baselines::admm_init(bp, Vec::Zero(A.cols())), stop, 0.0,
                                        make_admm_metrics_hook(bp, xs));
  out << "multi-block ADMM, N = " << blocks << ": " << (ar.converged ? "reached" : "did not reach") << " RelErr "
      << fmt(target) << " after " << ar.iterations << " sweeps (RelErr " << opt_fmt(ar.trace.back().rel_err)
      << ")\n";
  for (Preset preset : {Preset::kSOGDA, Preset::kCP}) {
    const auto prm = solver::auto_stepsizes(preset, 0.0, inst.problem.A.op_norm(1e-9), Regime::kAffine);
    solver::SolveOptions so;
    so.stopping = stop;
    so.diagnostics.metrics = make_metrics_hook(inst, EvalPoint::kLast);
    const auto res = solver::solve(inst.problem, prm, Vec::Zero(inst.problem.n()), so);
    out << solver::preset_name(preset) << "-AL: " << (res.converged ? "reached" : "did not reach") << " RelErr "
        << fmt(target) << " after " << res.iterations << " iterations\n";
  }
  return kExitOk;
}

}  // namespace

int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"unified primal-dual solver for conic problems"};
  app.require_subcommand(1);

  GenSpec gen;
  StepSpec steps;
  long iters = 1000;
  long record = 10;
  std::string point = "last";
  std::string out_csv;
  std::string summary_path;
  std::string write_problem;
  bool force = false;
  auto* solve = app.add_subcommand("solve", "run the unified solver");
  add_gen_options(solve, gen);
  add_step_options(solve, steps);
  solve->add_option("--iters", iters, "maximum iterations");
  solve->add_option("--record", record, "trace interval");
  solve->add_option("--point", point, "metrics at the last or ergodic iterate");
  solve->add_option("--out", out_csv, "trace CSV path");
  solve->add_option("--summary", summary_path, "summary JSON path");
  solve->add_option("--write-problem", write_problem, "save the instance as JSON");
  solve->add_flag("--force", force, "run uncertified step sizes");

  StepSpec csteps;
  double L_f = 0.0;
  double normA = 1.0;
  std::string regime = "affine";
  std::string cproblem;
  auto* certify = app.add_subcommand("certify", "check step sizes");
  add_step_options(certify, csteps);
  certify->add_option("--Lf", L_f, "Lipschitz constant of grad f");
  certify->add_option("--normA", normA, "operator norm of A");
  certify->add_option("--regime", regime, "affine or conic");
  certify->add_option("--problem", cproblem, "problem JSON for the exact PSD check");

  std::string config = "configs/lp_grid.json";
  std::string outdir = "bench_out";
  auto* bench = app.add_subcommand("bench", "sweep presets over a parameter grid");
  bench->add_option("--config", config, "grid config JSON");
  bench->add_option("--outdir", outdir, "output directory");

  int example = 0;
  long citers = 1000;
  int blocks = 1;
  double rho1 = 1.0, rho2 = 1.0, target = 1e-4;
  std::uint64_t cseed = 1;
  GenSpec cgen;
  cgen.gen = "bp";
  cgen.n = 1000;
  cgen.m = 300;
  cgen.k = 60;
  auto* compare = app.add_subcommand("compare-admm", "multi-block ADMM against primal-dual methods");
  compare->add_option("--example", example, "counterexample 1 or 2 (0: multi-block BP)");
  compare->add_option("--iters", citers, "iterations");
  compare->add_option("--x0-seed", cseed, "seed of the random initial point");
  compare->add_option("--blocks", blocks, "multi-block BP: number of blocks");
  compare->add_option("--rho1", rho1, "multi-block BP: coupling penalty");
  compare->add_option("--rho2", rho2, "multi-block BP: splitting penalty");
  compare->add_option("--target", target, "multi-block BP: RelErr target");
  add_gen_options(compare, cgen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*solve) {
      return run_solve(gen, steps, iters, record, point, out_csv, summary_path, write_problem, force, out, err);
    }
    if (*certify) return run_certify(csteps, L_f, normA, regime, cproblem, out);
    if (*bench) return run_bench(config, outdir, out);
    if (*compare) {
      if (example == 1 || example == 2) return run_compare_example(example, citers, cseed, out);
      if (example != 0) throw ConfigurationError("--example must be 1 or 2");
      return run_compare_bp(cgen, blocks, citers, rho1, rho2, target, out);
    }
  } catch (const baselines::AdmmDivergenceError& e) {
    err << "diverged: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace unipd::harness
