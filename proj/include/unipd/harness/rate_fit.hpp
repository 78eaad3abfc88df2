#ifndef UNIPD_HARNESS_RATE_FIT_HPP
#define UNIPD_HARNESS_RATE_FIT_HPP

#include <string>
#include <vector>

#include "unipd/solver.hpp"

namespace unipd::harness {

enum class Column { kObjGap, kPinf, kRelErr, kKktRes, kPotential };

std::string column_name(Column c);
Column parse_column(const std::string& name);

/// kSublinear: log(value) against log(iter). kLinear: log(value) against iter.
enum class FitMode { kSublinear, kLinear };

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  long points = 0;
};

/// Least-squares fit on paired samples; needs >= 10 points, all values > 0
/// (DomainError otherwise) and iter > 0 in sublinear mode.
RateFit fit_rate(const std::vector<double>& iters, const std::vector<double>& values, FitMode mode);

/// Fit over trace rows with iter_lo <= iter <= iter_hi that carry the column.
RateFit fit_rate(const solver::Trace& trace, Column column, FitMode mode, long iter_lo, long iter_hi);

}  // namespace unipd::harness

#endif  // UNIPD_HARNESS_RATE_FIT_HPP
