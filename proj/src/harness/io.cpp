#include "unipd/harness/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace unipd::harness {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json vec_json(const Vec& v) {
  json a = json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

// Infinite bounds become null; the reader knows the sign from the field.
json bound_json(const Vec& v) {
  json a = json::array();
  for (long i = 0; i < v.size(); ++i) {
    if (std::isinf(v[i])) {
      a.push_back(nullptr);
    } else {
      a.push_back(v[i]);
    }
  }
  return a;
}

Vec json_vec(const json& a, double null_value = std::numeric_limits<double>::quiet_NaN()) {
  if (!a.is_array()) throw ConfigurationError("expected a JSON array of numbers");
  Vec v(static_cast<long>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_null()) {
      if (std::isnan(null_value)) throw ConfigurationError("null entry where a number is required");
      v[static_cast<long>(i)] = null_value;
    } else {
      v[static_cast<long>(i)] = a[i].get<double>();
    }
  }
  return v;
}

json mat_json(const Mat& M) {
  json rows = json::array();
  for (long i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (long j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

Mat json_mat(const json& rows, long expected_cols = -1) {
  if (!rows.is_array()) throw ConfigurationError("matrix must be an array of rows");
  const long m = static_cast<long>(rows.size());
  long n = expected_cols;
  if (n < 0) n = m > 0 ? static_cast<long>(rows[0].size()) : 0;
  Mat M(m, n);
  for (long i = 0; i < m; ++i) {
    const json& r = rows[static_cast<std::size_t>(i)];
    if (!r.is_array() || static_cast<long>(r.size()) != n) throw DimensionError("ragged matrix rows in JSON");
    for (long j = 0; j < n; ++j) M(i, j) = r[static_cast<std::size_t>(j)].get<double>();
  }
  return M;
}

json cone_json(const Cone& K) {
  json blocks = json::array();
  for (const auto& b : K.blocks()) blocks.push_back({{"kind", cones::kind_name(b.kind)}, {"dim", b.dim}});
  return {{"blocks", blocks}};
}

Cone json_cone(const json& j) {
  std::vector<Cone> parts;
  for (const auto& b : j.at("blocks")) {
    const long dim = b.at("dim").get<long>();
    switch (cones::parse_kind(b.at("kind").get<std::string>())) {
      case cones::ConeKind::kZero:
        parts.push_back(Cone::zero(dim));
        break;
      case cones::ConeKind::kNonpos:
        parts.push_back(Cone::nonpos(dim));
        break;
      case cones::ConeKind::kNonneg:
        parts.push_back(Cone::nonneg(dim));
        break;
    }
  }
  return Cone::product(parts);
}

json op_json(const LinearOperator& A) {
  switch (A.kind()) {
    case linops::OperatorKind::kDense:
      return {{"kind", "dense"}, {"rows", A.rows()}, {"cols", A.cols()}, {"data", mat_json(*A.dense_matrix())}};
    case linops::OperatorKind::kPartialDct:
      return {{"kind", "partial_dct"}, {"n", A.cols()}, {"rows", *A.dct_rows()}};
    case linops::OperatorKind::kHConcat: {
      json blocks = json::array();
      for (const auto& b : *A.blocks()) blocks.push_back(op_json(b));
      return {{"kind", "hconcat"}, {"blocks", blocks}};
    }
  }
  throw ConfigurationError("unknown operator kind");
}

LinearOperator json_op(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "dense") return LinearOperator::dense(json_mat(j.at("data"), j.at("cols").get<long>()));
  if (kind == "partial_dct") return LinearOperator::partial_dct(j.at("n").get<long>(), j.at("rows").get<std::vector<long>>());
  if (kind == "hconcat") {
    std::vector<LinearOperator> blocks;
    for (const auto& b : j.at("blocks")) blocks.push_back(json_op(b));
    return LinearOperator::hconcat(std::move(blocks));
  }
  throw ConfigurationError("unknown operator kind '" + kind + "'");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json prox_json(const ProxFunction& g) {
  return std::visit(overloaded{
                        [](const prox::ZeroFn&) -> json { return {{"kind", "zero"}}; },
                        [](const prox::L1Fn& f) -> json { return {{"kind", "l1"}, {"zeta", f.zeta}}; },
                        [](const prox::BoxFn& f) -> json {
                          return {{"kind", "box"}, {"lower", bound_json(f.lower)}, {"upper", bound_json(f.upper)}};
                        },
                        [](const prox::DualConeFn& f) -> json {
                          return {{"kind", "dual_cone"}, {"cone", cone_json(f.cone)}};
                        },
                        [](const prox::SeparableSumFn& f) -> json {
                          json parts = json::array();
                          for (const auto& p : f.parts) {
                            parts.push_back({{"fn", prox_json(p.fn)}, {"offset", p.offset}, {"length", p.length}});
                          }
                          return {{"kind", "separable_sum"}, {"parts", parts}};
                        },
                    },
                    g.fn());
}

ProxFunction json_prox(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return ProxFunction::zero();
  if (kind == "l1") return ProxFunction::l1(j.at("zeta").get<double>());
  if (kind == "box") return ProxFunction::box(json_vec(j.at("lower"), -kInf), json_vec(j.at("upper"), kInf));
  if (kind == "dual_cone") return ProxFunction::dual_cone_indicator(json_cone(j.at("cone")));
  if (kind == "separable_sum") {
    std::vector<prox::SumPart> parts;
    for (const auto& p : j.at("parts")) {
      parts.push_back({json_prox(p.at("fn")), p.at("offset").get<long>(), p.at("length").get<long>()});
    }
    return ProxFunction::separable_sum(std::move(parts));
  }
  throw ConfigurationError("unknown prox kind '" + kind + "'");
}

json smooth_json(const SmoothTerm& f) {
  return std::visit(overloaded{
                        [](const alm::ZeroSmooth& z) -> json { return {{"kind", "zero"}, {"n", z.n}}; },
                        [](const alm::LinearSmooth& l) -> json { return {{"kind", "linear"}, {"r", vec_json(l.r)}}; },
                        [](const alm::QuadraticSmooth& q) -> json {
                          return {{"kind", "quadratic"}, {"Q", mat_json(q.Q)}, {"q", vec_json(q.q)}};
                        },
                    },
                    f.term());
}

SmoothTerm json_smooth(const json& j, long n_default) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return SmoothTerm::zero(j.contains("n") ? j.at("n").get<long>() : n_default);
  if (kind == "linear") return SmoothTerm::linear(json_vec(j.at("r")));
  if (kind == "quadratic") {
    const Vec q = json_vec(j.at("q"));
    return SmoothTerm::quadratic(json_mat(j.at("Q"), q.size()), q);
  }
  throw ConfigurationError("unknown smooth term kind '" + kind + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write '" + path + "'");
  out << text;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string problem_to_json(const Instance& inst) {
  const ConicProblem& p = inst.problem;
  json j;
  j["f"] = smooth_json(p.f);
  j["h"] = prox_json(p.h);
  j["A"] = op_json(p.A);
  j["b"] = vec_json(p.b);
  j["cone"] = cone_json(p.K);
  j["s"] = p.s == alm::DualRegularizer::kZero ? "zero" : "dual_indicator";
  j["family"] = family_name(inst.family);
  j["n_x"] = inst.n_x;
  j["m_eq"] = inst.m_eq;
  if (!inst.partition.empty()) j["partition"] = inst.partition;
  if (inst.ref) {
    json r;
    r["x_star"] = vec_json(inst.ref->x_star);
    if (inst.ref->y_star) r["y_star"] = vec_json(*inst.ref->y_star);
    r["phi_star"] = inst.ref->phi_star;
    j["reference"] = r;
  }
  return j.dump() + "\n";
}

Instance problem_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("invalid problem JSON: ") + e.what());
  }
  try {
    LinearOperator A = json_op(j.at("A"));
    const std::string s = j.value("s", "zero");
    if (s != "zero" && s != "dual_indicator") throw ConfigurationError("s must be 'zero' or 'dual_indicator'");
    ConicProblem p{json_smooth(j.at("f"), A.cols()),
                   json_prox(j.at("h")),
                   A,
                   json_vec(j.at("b")),
                   json_cone(j.at("cone")),
                   s == "zero" ? alm::DualRegularizer::kZero : alm::DualRegularizer::kDualConeIndicator};
    p.validate();
    Instance inst{std::move(p)};
    inst.family = parse_family(j.value("family", "generic"));
    inst.n_x = j.value("n_x", inst.problem.n());
    inst.m_eq = j.value("m_eq", 0L);
    if (j.contains("partition")) inst.partition = j.at("partition").get<std::vector<long>>();
    if (j.contains("reference")) {
      const json& r = j.at("reference");
      ReferenceSolution ref;
      ref.x_star = json_vec(r.at("x_star"));
      if (r.contains("y_star")) ref.y_star = json_vec(r.at("y_star"));
      ref.phi_star = r.at("phi_star").get<double>();
      inst.ref = std::move(ref);
    }
    return inst;
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("malformed problem JSON: ") + e.what());
  }
}

void write_problem_file(const std::string& path, const Instance& inst) { write_file(path, problem_to_json(inst)); }

Instance read_problem_file(const std::string& path) { return problem_from_json(read_file(path)); }

void write_trace_csv(std::ostream& os, const solver::Trace& trace) {
  os << "iter,obj_gap,pinf,rel_err,kkt_res,potential,wall_ms\n";
  auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  for (const auto& r : trace) {
    os << r.iter << ',' << opt(r.obj_gap) << ',' << opt(r.pinf) << ',' << opt(r.rel_err) << ',' << opt(r.kkt_res)
       << ',' << opt(r.potential) << ',' << fmt(r.wall_ms) << '\n';
  }
}

void write_trace_csv(const std::string& path, const solver::Trace& trace) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write '" + path + "'");
  write_trace_csv(out, trace);
}

solver::Trace read_trace_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != "iter,obj_gap,pinf,rel_err,kkt_res,potential,wall_ms") {
    throw ConfigurationError("trace CSV header mismatch in '" + path + "'");
  }
  solver::Trace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 7) throw ConfigurationError("trace CSV row has wrong field count");
    auto opt = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return std::stod(s);
    };
    solver::TraceRow r;
    r.iter = std::stol(cells[0]);
    r.obj_gap = opt(cells[1]);
    r.pinf = opt(cells[2]);
    r.rel_err = opt(cells[3]);
    r.kkt_res = opt(cells[4]);
    r.potential = opt(cells[5]);
    r.wall_ms = std::stod(cells[6]);
    trace.push_back(r);
  }
  return trace;
}

std::string summary_to_json(const RunSummary& s) {
  json j;
  j["run_id"] = s.run_id;
  const auto& p = s.params;
  j["params"] = {{"tau", p.tau},     {"sigma", p.sigma}, {"rho", p.rho},
                 {"alpha", p.alpha}, {"beta", p.beta},   {"mu", p.mu},
                 {"preset", solver::preset_name(p.preset)},
                 {"dual_mode", p.dual_mode == solver::DualUpdateMode::kImplicit ? "implicit" : "explicit"}};
  json fm;
  const auto& r = s.final_metrics;
  fm["iter"] = r.iter;
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v && std::isfinite(*v)) {
      fm[key] = *v;
    } else {
      fm[key] = nullptr;
    }
  };
  put("obj_gap", r.obj_gap);
  put("pinf", r.pinf);
  put("rel_err", r.rel_err);
  put("kkt_res", r.kkt_res);
  put("potential", r.potential);
  fm["wall_ms"] = r.wall_ms;
  j["final_metrics"] = fm;
  json fits = json::object();
  for (const auto& [name, f] : s.slope_fits) {
    fits[name] = {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", f.points}};
  }
  j["slope_fits"] = fits;
  j["certified"] = s.certified;
  return j.dump(2) + "\n";
}

void write_summary_file(const std::string& path, const RunSummary& s) { write_file(path, summary_to_json(s)); }

}  // namespace unipd::harness
