#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace ccbo::robust {

struct MvnOptions {
  /// Lattice points per randomized shift (dimension >= 3 only).
  int points = 1000;
  int shifts = 10;
  std::uint64_t seed = 0x6d766e;
};

struct MvnResult {
  double value = 0.0;
  /// Three standard errors of the randomized QMC estimate; 0 for closed forms.
  double error = 0.0;
  /// Set when cov was not PSD and had to be projected.
  bool clipped = false;
};

/// P(Y <= upper) for Y ~ N(mean, cov).
///
/// Dimension 1 uses Phi, dimension 2 the bivariate normal integral by
/// Gauss-Legendre quadrature of the correlation integral, higher dimensions
/// the separation-of-variables transform with a randomized Richtmyer lattice.
/// Diagonal covariances short-circuit to a product of Phi terms and
/// zero-variance components to indicators.
MvnResult mvn_cdf(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov, const Eigen::VectorXd& upper,
                  const MvnOptions& options = {});

/// P(X <= h, Y <= k) for standard bivariate normals with correlation r.
double bvn_cdf(double h, double k, double r);

}  // namespace ccbo::robust
