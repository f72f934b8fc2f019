#pragma once

#include "ccbo/gp/constraint_model.hpp"
#include "ccbo/robust/mvn_cdf.hpp"
#include "ccbo/robust/quadrature.hpp"
#include "ccbo/robust/z_process.hpp"

#include <cstdint>

namespace ccbo::robust {

struct FeasibilityEstimate {
  double pof = 0.0;
  double expected_c = 0.0;
  int n_traj = 0;
  Eigen::Index n_u = 0;
};

/// Standard normal matrix (rows x n_traj) used as common random numbers: the
/// same columns drive the trajectories of every candidate design.
Eigen::MatrixXd trajectory_normals(Eigen::Index rows, int n_traj, std::uint64_t seed);

/// Fraction of posterior trajectories of the constraints over (x, nodes) whose
/// weighted share of nodes with every constraint <= 0 reaches 1 - alpha.
/// `normals` has M*l rows (node-major) and one column per trajectory.
double pof_trajectories(const gp::ConstraintModel& model, const Eigen::VectorXd& x, const UncertaintyQuadrature& quad,
                        double alpha, const Eigen::MatrixXd& normals);

FeasibilityEstimate pof_trajectories(const gp::ConstraintModel& model, const Eigen::VectorXd& x,
                                     const UncertaintyQuadrature& quad, int n_traj, double alpha, std::uint64_t seed);

/// sum_j w_j P(G(x, u_j) <= 0 for all constraints) under the posterior marginals.
double integrated_feasibility(const gp::ConstraintModel& model, const Eigen::VectorXd& x,
                              const UncertaintyQuadrature& quad, const MvnOptions& mvn = {});

/// E[C(x)] = 1 - alpha - integrated_feasibility(x).
double expected_c(const gp::ConstraintModel& model, const Eigen::VectorXd& x, const UncertaintyQuadrature& quad,
                  double alpha, const MvnOptions& mvn = {});

struct Incumbent {
  double value = 0.0;
  Eigen::Index index = 0;
  Eigen::VectorXd x;
  double expected_c = 0.0;
  /// No candidate met E[C] <= 0; the candidate with the largest integrated
  /// feasibility was returned instead.
  bool fallback = false;
};

/// Minimum of m_Z over the candidate rows subject to E[C] <= 0. Candidates are
/// visited in increasing m_Z so that E[C] is computed only until the first
/// feasible one; ties resolve to the lowest index.
Incumbent incumbent_feasible_min(const ZProcess& z, const gp::ConstraintModel& model, const Eigen::MatrixXd& candidates,
                                 const UncertaintyQuadrature& quad, double alpha, const MvnOptions& mvn = {});

}  // namespace ccbo::robust
