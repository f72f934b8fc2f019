#pragma once

#include "ccbo/opt/run_record.hpp"
#include "ccbo/problems/true_metrics.hpp"

#include <string>
#include <vector>

namespace ccbo::bench {

struct Quartiles {
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  int n = 0;
};

/// Sample quartiles with linear interpolation between order statistics
/// (position (n - 1) p). NaN fields when the sample is empty.
Quartiles quartiles(std::vector<double> values);

/// Running best over a run's rows: the smallest true mean objective among
/// incumbents that were truly feasible so far, with its location.
struct BestSoFar {
  bool found = false;
  double value = 0.0;
  Eigen::VectorXd x;
};
std::vector<BestSoFar> best_so_far(const opt::RunRecord& run);

struct ConvergencePoint {
  int constraint_evals = 0;
  Quartiles best;
  Quartiles distance;
  /// Runs that reached this budget (feasible or not).
  int runs = 0;
};

struct VariantConvergence {
  std::string variant;
  int l = 1;
  std::vector<ConvergencePoint> points;
};

/// Per-variant quartiles of the best feasible true objective and of the
/// Euclidean distance of its location to the reference optimum, indexed by
/// cumulative constraint evaluations. Runs without a feasible incumbent yet
/// are left out of that point's statistics.
std::vector<VariantConvergence> convergence(const std::vector<opt::RunRecord>& runs,
                                            const problems::ReferenceOptimum& reference);

struct ConstraintUsage {
  std::string variant;
  int repetition = -1;  // -1 for the per-variant average
  std::vector<int> calls;
  std::vector<double> shares;
};

/// Per-run constraint call counts and shares, followed by one averaged row per
/// variant (mean of the per-run shares).
std::vector<ConstraintUsage> constraint_usage(const std::vector<opt::RunRecord>& runs);

/// Reads every runs/*.csv below run_dir in file-name order. Throws DataError
/// when there is none.
std::vector<opt::RunRecord> load_runs(const std::string& run_dir);

/// Writes convergence.dat and convergence_<variant>.dat tables plus a gnuplot
/// stub into run_dir and returns the tables.
std::vector<VariantConvergence> report_convergence(const std::string& run_dir);

/// Writes constraint_usage.csv into run_dir and returns its rows.
std::vector<ConstraintUsage> report_constraint_usage(const std::string& run_dir);

}  // namespace ccbo::bench
