#pragma once

#include "ccbo/gp/gp_model.hpp"
#include "ccbo/robust/quadrature.hpp"

#include <Eigen/Dense>

namespace ccbo::robust {

/// The objective averaged over the uncertain parameters, Z(x) = sum_j w_j F(x, u_j),
/// as a Gaussian process in x.
///
/// Uses the separability of the squared-exponential kernel in x and u: every
/// quadrature double sum collapses to a kernel in x times a precomputed
/// weighted u-kernel sum, so a query costs O(n) for the mean and O(n^2) for
/// the variance instead of O(M n^2).
class ZProcess {
 public:
  ZProcess(const gp::GpModel& objective, const UncertaintyQuadrature& quad);

  /// Rows of xs are design points in raw units.
  Eigen::VectorXd mean(const Eigen::MatrixXd& xs) const;
  Eigen::VectorXd variance(const Eigen::MatrixXd& xs) const;
  Eigen::MatrixXd covariance(const Eigen::MatrixXd& xa, const Eigen::MatrixXd& xb) const;

  /// Posterior covariances Cov(Z(x), F(p)) for the joint points p (raw units).
  Eigen::VectorXd cross_covariance(const Eigen::VectorXd& x, const gp::PointSet& points) const;

  Eigen::Index x_dim() const { return d_; }
  const gp::GpModel& objective() const { return *model_; }

 private:
  Eigen::MatrixXd normalize_x(const Eigen::MatrixXd& xs) const;
  /// exp(-|a - b|^2 / 2) on lengthscale-scaled rows.
  static Eigen::MatrixXd se(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
  /// Prior kbar(x)_i = sigma^2 e_x(x_i, x) h_i, one column per query.
  Eigen::MatrixXd kbar(const Eigen::MatrixXd& xs_scaled) const;

  const gp::GpModel* model_;
  Eigen::Index d_ = 0;
  Eigen::MatrixXd data_x_;   // lengthscale-scaled model units
  Eigen::MatrixXd data_u_;
  Eigen::MatrixXd nodes_u_;  // lengthscale-scaled model units
  Eigen::VectorXd weights_;
  Eigen::VectorXd h_;        // sum_j w_j e_u(u_i, u_j)
  double s_uu_ = 0.0;        // sum_jj' w_j w_j' e_u(u_j, u_j')
  double shift_ = 0.0;
  double scale_ = 1.0;
};

}  // namespace ccbo::robust
