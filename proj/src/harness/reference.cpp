#include "unipd/harness/reference.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "unipd/certify.hpp"
#include "unipd/harness/io.hpp"
#include "unipd/harness/metrics.hpp"

namespace unipd::harness {

std::uint64_t problem_key(const Instance& inst) {
  Instance bare = inst;
  bare.ref.reset();
  const std::string text = problem_to_json(bare);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

using nlohmann::json;

std::optional<ReferenceSolution> load_cache(const std::string& path, std::uint64_t key) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    const json j = json::parse(in);
    if (j.at("key").get<std::string>() != std::to_string(key)) return std::nullopt;
    auto vec = [](const json& a) {
      Vec v(static_cast<long>(a.size()));
      for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<long>(i)] = a[i].get<double>();
      return v;
    };
    ReferenceSolution r;
    r.x_star = vec(j.at("x_star"));
    r.y_star = vec(j.at("y_star"));
    r.phi_star = j.at("phi_star").get<double>();
    return r;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void store_cache(const std::string& path, std::uint64_t key, const ReferenceSolution& r) {
  auto arr = [](const Vec& v) {
    json a = json::array();
    for (long i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
  };
  json j;
  j["key"] = std::to_string(key);
  j["x_star"] = arr(r.x_star);
  j["y_star"] = arr(*r.y_star);
  j["phi_star"] = r.phi_star;
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write reference cache '" + path + "'");
  out << j.dump() << "\n";
}

}  // namespace

ReferenceSolution compute_reference(const Instance& inst, const ReferenceRunOptions& opts) {
  const std::uint64_t key = problem_key(inst);
  if (!opts.cache_path.empty()) {
    if (auto cached = load_cache(opts.cache_path, key)) return *cached;
  }
  const ConicProblem& p = inst.problem;
  const double L_f = p.f.lipschitz();
  const double normA = p.A.op_norm(1e-9);
  const solver::Regime regime = p.K.is_zero() ? solver::Regime::kAffine : solver::Regime::kConic;
  const auto params = solver::auto_stepsizes(solver::Preset::kCP, L_f, normA, regime);

  solver::SolveOptions so;
  so.stopping.max_iter = opts.max_iter;
  so.stopping.record_interval = opts.check_interval;
  so.diagnostics.metrics = [&p](const solver::IterateState& st, solver::TraceRow& row) {
    row.kkt_res = kkt_residual(p, st.x, st.y);
  };
  const double tol = opts.kkt_tol;
  so.stopping.converged = [tol](const solver::TraceRow& row) { return row.kkt_res && *row.kkt_res <= tol; };
  const auto res = solver::solve(p, params, Vec::Zero(p.n()), so);

  ReferenceSolution ref{res.state.x, res.state.y, alm::eval_phi(p, res.state.x)};
  if (!opts.cache_path.empty()) store_cache(opts.cache_path, key, ref);
  return ref;
}

}  // namespace unipd::harness
