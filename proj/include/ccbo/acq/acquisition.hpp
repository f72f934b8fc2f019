#pragma once

#include "ccbo/gp/constraint_model.hpp"
#include "ccbo/robust/feasibility.hpp"
#include "ccbo/robust/mvn_cdf.hpp"
#include "ccbo/robust/quadrature.hpp"
#include "ccbo/robust/z_process.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ccbo::acq {

struct AcquisitionSettings {
  double alpha = 0.05;
  int n_traj = 200;
  int n_improvement = 500;
  robust::MvnOptions mvn;
};

/// Everything the criteria of one iteration read. Holds references: the
/// models, quadrature and Z process must outlive the context. The random
/// numbers are drawn once per context and shared by every candidate.
class AcquisitionContext {
 public:
  AcquisitionContext(const gp::GpModel& objective, const gp::ConstraintModel& constraints,
                     const robust::UncertaintyQuadrature& quad, const robust::ZProcess& z, double z_min_feas,
                     Eigen::MatrixXd candidate_x, Eigen::MatrixXd candidate_u, const AcquisitionSettings& settings,
                     std::uint64_t seed);

  const gp::GpModel& objective() const { return *objective_; }
  const gp::ConstraintModel& constraints() const { return *constraints_; }
  const robust::UncertaintyQuadrature& quad() const { return *quad_; }
  const robust::ZProcess& z() const { return *z_; }
  double z_min_feas() const { return z_min_feas_; }
  const Eigen::MatrixXd& candidate_x() const { return candidate_x_; }
  const Eigen::MatrixXd& candidate_u() const { return candidate_u_; }
  const AcquisitionSettings& settings() const { return settings_; }
  const Eigen::MatrixXd& trajectory_normals() const { return traj_normals_; }
  const Eigen::VectorXd& improvement_normals() const { return improvement_normals_; }

 private:
  const gp::GpModel* objective_;
  const gp::ConstraintModel* constraints_;
  const robust::UncertaintyQuadrature* quad_;
  const robust::ZProcess* z_;
  double z_min_feas_;
  Eigen::MatrixXd candidate_x_;
  Eigen::MatrixXd candidate_u_;
  AcquisitionSettings settings_;
  Eigen::MatrixXd traj_normals_;
  Eigen::VectorXd improvement_normals_;
};

/// Probability of feasibility at x from the context's common trajectories.
double pof(const AcquisitionContext& ctx, const Eigen::VectorXd& x);

/// EI of Z at x against z_min_feas, times the probability of feasibility.
double efi(const AcquisitionContext& ctx, const Eigen::VectorXd& x);

struct XTarget {
  Eigen::Index index = 0;
  Eigen::VectorXd x;
  double efi = 0.0;
  double pof = 0.0;
  /// Every EFI was zero; x maximizes the probability of feasibility instead
  /// (ties broken by the smallest E[C], then the lowest index).
  bool fallback = false;
  /// Number of probability-of-feasibility evaluations spent.
  int pof_evaluations = 0;
};

/// Argmax of EFI over the candidate designs, lowest index on ties. Exact
/// branch and bound: since PoF <= 1, candidates are visited by decreasing EI
/// and the search stops once EI falls below the best EFI.
XTarget select_x_targ(const AcquisitionContext& ctx);

/// One-step-ahead improvement variance at x_targ after observing F at
/// (x_targ, u) for each row u of `us`.
Eigen::VectorXd sf(const AcquisitionContext& ctx, const Eigen::VectorXd& x_targ, const Eigen::MatrixXd& us);

/// One-step-ahead integrated Bernoulli variance of feasibility at x_targ after
/// observing constraint `p` (or all constraints when empty) at (x_targ, u) for
/// each row u of `us`.
Eigen::VectorXd sg(const AcquisitionContext& ctx, const Eigen::VectorXd& x_targ, const Eigen::MatrixXd& us,
                   std::optional<int> p);

/// Current improvement variance of Z at x.
double current_improvement_variance(const AcquisitionContext& ctx, const Eigen::VectorXd& x);
/// Current integrated Bernoulli variance sum_j w_j p_j (1 - p_j) at x.
double current_feasibility_variance(const AcquisitionContext& ctx, const Eigen::VectorXd& x);

/// S = S_f * S_g(all constraints), per row of us.
Eigen::VectorXd proxy_s(const AcquisitionContext& ctx, const Eigen::VectorXd& x_targ, const Eigen::MatrixXd& us);

/// kCommon: one u for every function. kSplit: separate u for the objective
/// and for the constraints, all constraints evaluated. kSplitSelect: as
/// kSplit, and a single constraint is chosen with its u.
enum class USelectionMode { kCommon, kSplit, kSplitSelect };

struct UTargets {
  Eigen::VectorXd u_f;
  Eigen::VectorXd u_g;
  Eigen::Index index_f = 0;
  Eigen::Index index_g = 0;
  /// Selected constraint in split mode; empty means all constraints.
  std::optional<int> p;
  double criterion_f = 0.0;
  double criterion_g = 0.0;
};

/// Common mode: one u minimizing proxy_s, used for every function. Split
/// modes: u_f minimizing S_f, and u_g minimizing S_g over all constraints or,
/// with selection, the pair (u_g, p) minimizing S_g over the flattened index
/// u * l + p. Candidates that would repeat an existing data
/// row are skipped while any alternative remains; ties go to the lowest index.
UTargets select_u(const AcquisitionContext& ctx, const Eigen::VectorXd& x_targ, USelectionMode mode);

/// Acquisition surface dump: one row per candidate with its coordinates and
/// the criterion value.
void write_surface_csv(std::ostream& os, const Eigen::MatrixXd& candidates, const Eigen::VectorXd& values,
                       const std::string& criterion);

}  // namespace ccbo::acq
