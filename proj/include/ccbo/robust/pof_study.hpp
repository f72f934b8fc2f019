#pragma once

#include "ccbo/gp/train.hpp"
#include "ccbo/problems/problem.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace ccbo::robust {

struct PofStudyOptions {
  Eigen::Index n_train = 30;  // per constraint
  Eigen::Index n_test = 400;
  Eigen::Index n_mc = 1000;
  int repetitions = 10;
  gp::TrainOptions train;
};

struct PofStudyPoint {
  int repetition = 0;
  Eigen::VectorXd x;
  double true_pof = 0.0;
  double error_independent = 0.0;
  double error_multioutput = 0.0;
};

struct PofStudyRepetition {
  double mean_error_independent = 0.0;
  double mean_error_multioutput = 0.0;
};

struct PofStudyResult {
  std::vector<PofStudyPoint> points;
  std::vector<PofStudyRepetition> repetitions;
};

/// Accuracy of the predicted probability of feasibility, independent versus
/// coupled constraint models.
///
/// Each repetition draws a separate maximin design of `n_train` joint points
/// per constraint, trains one scalar GP per constraint and one multi-output GP
/// on the stacked data, and compares at `n_test` uniform design points
/// sum_j Phi_l(G(x, u_j) <= 0) / N with the true fraction of the same N
/// u-samples satisfying every constraint.
PofStudyResult pof_error_study(const problems::ProblemDefinition& problem, const PofStudyOptions& options,
                               std::uint64_t seed);

/// Per-point rows (repetition, x..., true_pof, error_independent,
/// error_multioutput) followed by per-repetition summary rows.
void write_pof_study_csv(std::ostream& os, const PofStudyResult& result);

}  // namespace ccbo::robust
