#ifndef UNIPD_HARNESS_IO_HPP
#define UNIPD_HARNESS_IO_HPP

#include <iosfwd>
#include <map>
#include <string>

#include "unipd/harness/generators.hpp"
#include "unipd/harness/rate_fit.hpp"
#include "unipd/solver.hpp"

namespace unipd::harness {

/// Problem JSON: {"f", "h", "A", "b", "cone", "s"} plus "family", "n_x",
/// "m_eq", optional "partition" and "reference". Infinite box bounds are null.
/// Output is deterministic, so write -> read -> write is byte-identical.
std::string problem_to_json(const Instance& inst);
Instance problem_from_json(const std::string& text);

void write_problem_file(const std::string& path, const Instance& inst);
Instance read_problem_file(const std::string& path);

/// Header iter,obj_gap,pinf,rel_err,kkt_res,potential,wall_ms; missing
/// metrics are empty fields; numbers use 17 significant digits.
void write_trace_csv(std::ostream& os, const solver::Trace& trace);
void write_trace_csv(const std::string& path, const solver::Trace& trace);
solver::Trace read_trace_csv(const std::string& path);

struct RunSummary {
  std::string run_id;
  solver::SolverParams params;
  solver::TraceRow final_metrics;
  std::map<std::string, RateFit> slope_fits;
  bool certified = false;
};

std::string summary_to_json(const RunSummary& s);
void write_summary_file(const std::string& path, const RunSummary& s);

}  // namespace unipd::harness

#endif  // UNIPD_HARNESS_IO_HPP
