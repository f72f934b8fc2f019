#pragma once

#include "ccbo/gp/gp_model.hpp"

#include <vector>

namespace ccbo::gp {

/// The l constraint processes, modeled either as l independent scalar GPs or
/// as one output-as-input GP whose discrete level indexes the constraint.
///
/// All point sets passed here carry levels (constraint index, 0-based). For
/// the independent form, points of different levels are uncorrelated.
class ConstraintModel {
 public:
  static ConstraintModel independent(std::vector<GpModel> models);
  static ConstraintModel coupled(GpModel model);

  int n_outputs() const { return n_outputs_; }
  bool is_coupled() const { return coupled_; }
  const std::vector<GpModel>& models() const { return models_; }
  const GpModel& model(int level) const;

  Eigen::VectorXd mean(const PointSet& q) const;
  Eigen::MatrixXd covariance(const PointSet& a, const PointSet& b) const;
  Prediction predict(const PointSet& q) const;
  std::vector<Eigen::MatrixXd> block_covariances(const PointSet& q, Eigen::Index block) const;

  /// Kriging Believer covariance update over `queries` after adding `pending`.
  Eigen::MatrixXd one_step_update_cov(const PointSet& pending, const PointSet& queries) const;

  /// Raw-unit jitter variance applied to a pending row of the given level.
  double jitter_variance(int level) const;

  /// Total conditioning rows across all constraint data.
  Eigen::Index total_rows() const;

 private:
  std::vector<GpModel> models_;
  int n_outputs_ = 0;
  bool coupled_ = false;
};

}  // namespace ccbo::gp
