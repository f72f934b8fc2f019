#pragma once

#include <Eigen/Dense>

namespace ccbo::gp {

/// Diagonal jitter schedule, relative to a reference variance: start at
/// `initial`, multiply by `factor` after each failed factorization, give up
/// beyond `max`.
struct JitterPolicy {
  double initial = 1e-10;
  double factor = 10.0;
  double max = 1e-4;
};

struct JitteredCholesky {
  Eigen::LLT<Eigen::MatrixXd> llt;
  /// Relative jitter that made the factorization succeed.
  double jitter = 0.0;
};

/// Factorizes K + jitter * scale * I with the first jitter of the schedule
/// that succeeds. Throws IllConditionedError when the schedule is exhausted.
JitteredCholesky jittered_cholesky(const Eigen::MatrixXd& K, double scale, const JitterPolicy& policy = {});

/// Lower factor A with A A^T ~= cov, used to draw correlated samples.
struct CovarianceFactor {
  Eigen::MatrixXd lower;
  /// True when the matrix had to be projected onto the PSD cone.
  bool clipped = false;
};

/// Jittered Cholesky first; when that fails, eigen-decomposition with negative
/// eigenvalues clipped to zero.
CovarianceFactor factor_covariance(const Eigen::MatrixXd& cov, const JitterPolicy& policy = {});

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues set to 0).
Eigen::MatrixXd clip_to_psd(const Eigen::MatrixXd& cov, bool* clipped = nullptr);

}  // namespace ccbo::gp
