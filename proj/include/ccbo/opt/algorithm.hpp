#pragma once

#include "ccbo/acq/acquisition.hpp"
#include "ccbo/gp/train.hpp"
#include "ccbo/opt/run_record.hpp"
#include "ccbo/problems/problem.hpp"
#include "ccbo/problems/true_metrics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ccbo::opt {

/// REF: independent constraint models, common u. SMCS: independent models,
/// split u and constraint selection. MMCU: coupled model, common u. MMCS:
/// coupled model, split u and constraint selection.
enum class Variant { kRef, kSmcs, kMmcu, kMmcs };

std::string variant_name(Variant v);
/// Throws ConfigError on unknown names.
Variant parse_variant(const std::string& name);
bool coupled_constraints(Variant v);
bool selects_constraint(Variant v);

struct AlgorithmConfig {
  Variant variant = Variant::kRef;
  Eigen::Index t_init = 6;
  /// Total constraint-function evaluations allowed after the initial design.
  int budget = 40;
  /// Reliability margin; negative means use the problem's own alpha.
  double alpha = -1.0;
  Eigen::Index n_u = 100;
  int n_traj = 200;
  int n_improvement = 500;
  /// Candidate sets hold cand_factor * dimension points.
  int cand_factor = 500;
  /// Starts of the first training; later iterations warm-start with
  /// `retrain_restarts` starts in total.
  int restarts = 20;
  int retrain_restarts = 3;
  gp::CobylaOptions local{0.25, 1e-3, 300};
  /// Repetition seed: fixes the initial design and candidate sets, which are
  /// therefore shared by all variants of a repetition.
  std::uint64_t seed = 0;
  int repetition = 0;
  /// Overrides the u-selection of the variant: split u without constraint
  /// selection for REF/MMCU when set to true, common u for SMCS/MMCS when false.
  std::optional<bool> split_u;
  Eigen::Index reporting_mc = 10000;
  Eigen::Index max_rows = 3000;

  /// Throws ConfigError.
  void validate() const;
};

/// Candidate designs and uncertain parameters for one repetition.
struct CandidateSets {
  Eigen::MatrixXd x;
  Eigen::MatrixXd u;
};
CandidateSets make_candidates(const problems::ProblemDefinition& problem, int cand_factor, std::uint64_t seed);

/// Runs one optimization. Failures of the problem functions or of training
/// (after one retry with fresh starts) stop the run; the partial record is
/// returned with `error` set.
RunRecord run(const problems::ProblemDefinition& problem, const AlgorithmConfig& config);

/// Best design by the posterior means: argmin m_Z subject to E[C] <= 0.
robust::Incumbent final_solution(const gp::GpModel& objective, const gp::ConstraintModel& constraints,
                                 const Eigen::MatrixXd& candidate_x, const robust::UncertaintyQuadrature& quad,
                                 double alpha);

}  // namespace ccbo::opt
