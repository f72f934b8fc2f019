#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ccbo::opt {

inline constexpr int kRunCsvSchema = 1;

/// State after `iteration` optimization steps; row 0 describes the initial
/// design. The acquisition fields describe the step that produced the row and
/// are empty on row 0.
struct IterationRow {
  int iteration = 0;
  int constraint_evals = 0;
  int objective_evals = 0;
  std::vector<int> constraint_calls;  // per constraint, cumulative
  Eigen::VectorXd x_targ;
  Eigen::VectorXd u_f;
  Eigen::VectorXd u_g;
  /// Evaluated constraint (0-based); empty means all of them.
  std::optional<int> p;
  bool x_fallback = false;
  Eigen::VectorXd incumbent_x;
  double incumbent_value = 0.0;
  bool incumbent_fallback = false;
  double true_mean_objective = 0.0;
  double true_pof = 0.0;
  bool true_feasible = false;
};

struct RunRecord {
  std::string problem;
  std::string variant;
  int repetition = 0;
  Eigen::Index d = 0;
  Eigen::Index m = 0;
  int l = 0;
  double alpha = 0.05;
  std::vector<IterationRow> rows;
  /// Empty when the run completed; otherwise the reason it stopped early.
  std::string error;
  double wall_seconds = 0.0;

  bool completed() const { return error.empty(); }
  const IterationRow& final_row() const { return rows.back(); }
};

/// Versioned CSV: a schema comment line, a header, one line per row. Contains
/// no timing so that reruns are byte-identical.
void write_run_csv(std::ostream& os, const RunRecord& record);
RunRecord read_run_csv(std::istream& is);

/// One JSON object on a single line: final solution, counters, wall time.
std::string run_summary_json(const RunRecord& record);

}  // namespace ccbo::opt
