#include "ccbo/gp/linalg.hpp"

#include "ccbo/errors.hpp"

#include <cmath>

namespace ccbo::gp {

JitteredCholesky jittered_cholesky(const Eigen::MatrixXd& K, double scale, const JitterPolicy& policy) {
  if (K.rows() != K.cols()) throw ShapeError("jittered_cholesky: matrix is not square");
  if (!K.allFinite()) throw IllConditionedError("jittered_cholesky: non-finite covariance");
  JitteredCholesky out;
  if (K.rows() == 0) return out;
  const double ref = scale > 0.0 ? scale : 1.0;
  for (double jitter = policy.initial; jitter <= policy.max * (1.0 + 1e-12); jitter *= policy.factor) {
    Eigen::MatrixXd A = K;
    A.diagonal().array() += jitter * ref;
    out.llt.compute(A);
    if (out.llt.info() == Eigen::Success && out.llt.matrixLLT().diagonal().allFinite()) {
      out.jitter = jitter;
      return out;
    }
  }
  throw IllConditionedError("Cholesky failed after maximum jitter escalation");
}

Eigen::MatrixXd clip_to_psd(const Eigen::MatrixXd& cov, bool* clipped) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (cov + cov.transpose()));
  Eigen::VectorXd ev = es.eigenvalues();
  const bool neg = (ev.array() < 0.0).any();
  if (clipped) *clipped = neg;
  if (!neg) return 0.5 * (cov + cov.transpose());
  ev = ev.cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

CovarianceFactor factor_covariance(const Eigen::MatrixXd& cov, const JitterPolicy& policy) {
  CovarianceFactor out;
  const Eigen::Index n = cov.rows();
  if (n == 0) return out;
  const double ref = std::max(cov.diagonal().cwiseAbs().mean(), 1e-300);
  try {
    auto jc = jittered_cholesky(cov, ref, policy);
    out.lower = jc.llt.matrixL();
    return out;
  } catch (const IllConditionedError&) {
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (cov + cov.transpose()));
  Eigen::VectorXd ev = es.eigenvalues();
  out.clipped = (ev.array() < 0.0).any();
  out.lower = es.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  return out;
}

}  // namespace ccbo::gp
