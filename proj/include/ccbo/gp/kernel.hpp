#pragma once

#include "ccbo/gp/point_set.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace ccbo::gp {

/// Hyperparameters of the product kernel
///
///   k((z, p), (z', p')) = variance * exp(-1/2 sum_i ((z_i - z'_i) / lengthscale_i)^2) * T[p, p'],
///
/// where z = (x, u) are continuous coordinates and T is the level covariance
/// built from hypersphere angles. With n_levels == 0 the kernel is the plain
/// anisotropic squared exponential. Units are those of the model: inputs
/// normalized to the unit box, outputs standardized.
struct KernelSpec {
  double variance = 1.0;
  Eigen::VectorXd lengthscales;
  int n_levels = 0;
  /// Strict lower triangle, row by row: theta(1,0), theta(2,0), theta(2,1), ...
  std::vector<double> angles;
  double level_variance = 1.0;
  double prior_mean = 0.0;

  Eigen::Index input_dim() const { return lengthscales.size(); }
  bool multi_output() const { return n_levels > 0; }

  /// Throws DomainError on non-positive variance/lengthscales, angles outside
  /// [-pi, pi] or a wrong number of angles.
  void validate() const;

  static KernelSpec scalar(Eigen::Index dim, double lengthscale = 0.3);
  static KernelSpec multi_output(Eigen::Index dim, int n_levels, double lengthscale = 0.3);
};

constexpr std::size_t angle_count(int n_levels) {
  return n_levels > 1 ? static_cast<std::size_t>(n_levels) * static_cast<std::size_t>(n_levels - 1) / 2 : 0;
}

/// Row-wise hypersphere coordinates scaled by sqrt(level_variance); row m is
/// the image of level m on the sphere of radius sigma_z.
Eigen::MatrixXd hypersphere_factor(std::span<const double> angles, int n_levels, double level_variance);

/// Level covariance T = L L^T with L from hypersphere_factor. Symmetric PSD
/// with every diagonal entry equal to level_variance.
Eigen::MatrixXd hypersphere_matrix(std::span<const double> angles, int n_levels, double level_variance);

/// Kernel value between two points given in model units.
double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& a, std::optional<int> level_a,
                   const Eigen::Ref<const Eigen::VectorXd>& b, std::optional<int> level_b);

double kernel_eval(const KernelSpec& spec, const JointPoint& a, const JointPoint& b);

/// Dense cross-covariance between two point sets already in model units.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const PointSet& a, const PointSet& b);

}  // namespace ccbo::gp
