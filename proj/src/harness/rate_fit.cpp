#include "unipd/harness/rate_fit.hpp"

#include <cmath>

namespace unipd::harness {

std::string column_name(Column c) {
  switch (c) {
    case Column::kObjGap:
      return "obj_gap";
    case Column::kPinf:
      return "pinf";
    case Column::kRelErr:
      return "rel_err";
    case Column::kKktRes:
      return "kkt_res";
    case Column::kPotential:
      return "potential";
  }
  return "obj_gap";
}

Column parse_column(const std::string& name) {
  for (Column c : {Column::kObjGap, Column::kPinf, Column::kRelErr, Column::kKktRes, Column::kPotential}) {
    if (column_name(c) == name) return c;
  }
  throw ConfigurationError("unknown trace column '" + name + "'");
}

RateFit fit_rate(const std::vector<double>& iters, const std::vector<double>& values, FitMode mode) {
  require_dim(static_cast<long>(values.size()), static_cast<long>(iters.size()), "fit_rate values");
  const long n = static_cast<long>(iters.size());
  if (n < 10) throw ParameterError("fit_rate needs at least 10 points");
  Vec t(n), v(n);
  for (long i = 0; i < n; ++i) {
    if (!(values[i] > 0.0)) throw DomainError("fit_rate needs positive metric values");
    if (mode == FitMode::kSublinear && !(iters[i] > 0.0)) throw DomainError("log-log fit needs iter > 0");
    t[i] = mode == FitMode::kSublinear ? std::log(iters[i]) : iters[i];
    v[i] = std::log(values[i]);
  }
  const double tm = t.mean();
  const double vm = v.mean();
  const Vec tc = t.array() - tm;
  const Vec vc = v.array() - vm;
  const double stt = tc.squaredNorm();
  if (!(stt > 0.0)) throw DomainError("fit_rate needs distinct abscissae");
  RateFit fit;
  fit.points = n;
  fit.slope = tc.dot(vc) / stt;
  fit.intercept = vm - fit.slope * tm;
  const double svv = vc.squaredNorm();
  const double sse = (vc - fit.slope * tc).squaredNorm();
  fit.r2 = svv > 0.0 ? 1.0 - sse / svv : 1.0;
  return fit;
}

RateFit fit_rate(const solver::Trace& trace, Column column, FitMode mode, long iter_lo, long iter_hi) {
  std::vector<double> it, val;
  for (const auto& row : trace) {
    if (row.iter < iter_lo || row.iter > iter_hi) continue;
    std::optional<double> v;
    switch (column) {
      case Column::kObjGap:
        v = row.obj_gap;
        break;
      case Column::kPinf:
        v = row.pinf;
        break;
      case Column::kRelErr:
        v = row.rel_err;
        break;
      case Column::kKktRes:
        v = row.kkt_res;
        break;
      case Column::kPotential:
        v = row.potential;
        break;
    }
    if (!v) continue;
    it.push_back(static_cast<double>(row.iter));
    val.push_back(*v);
  }
  return fit_rate(it, val, mode);
}

}  // namespace unipd::harness
