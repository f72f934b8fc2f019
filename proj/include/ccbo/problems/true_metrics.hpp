#pragma once

#include "ccbo/problems/problem.hpp"

#include <cstdint>

namespace ccbo::problems {

/// Monte-Carlo oracles on the true problem functions with a fixed u-sample.
class TrueMetrics {
 public:
  TrueMetrics(ProblemDefinition problem, Eigen::Index n_mc, std::uint64_t seed);

  double mean_objective(const Eigen::VectorXd& x) const;
  /// Fraction of the u-sample where every constraint is <= 0.
  double pof(const Eigen::VectorXd& x) const;
  bool feasible(const Eigen::VectorXd& x) const { return pof(x) >= 1.0 - problem_.alpha; }

  const ProblemDefinition& problem() const { return problem_; }
  const Eigen::MatrixXd& u_sample() const { return u_; }

 private:
  ProblemDefinition problem_;
  Eigen::MatrixXd u_;
};

struct ReferenceOptimum {
  Eigen::VectorXd x;
  double value = 0.0;
  double pof = 0.0;
};

/// Best feasible point of a regular grid with `per_dim` points per design
/// dimension, evaluated with `metrics`.
ReferenceOptimum enumerate_optimum(const TrueMetrics& metrics, int per_dim);

/// Settings used to freeze the stored reference optima.
struct ReferenceSettings {
  Eigen::Index n_mc;
  int per_dim;
  std::uint64_t seed;
};
ReferenceSettings reference_settings(const std::string& problem_name);

/// Frozen result of enumerate_optimum under reference_settings(name).
ReferenceOptimum reference_optimum(const std::string& problem_name);

}  // namespace ccbo::problems
