#pragma once

#include <Eigen/Dense>

#include <functional>

namespace ccbo::gp {

struct CobylaOptions {
  double rho_begin = 0.25;
  double rho_end = 1e-4;
  int max_evals = 500;
};

struct CobylaResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evals = 0;
};

/// Derivative-free minimization over the unit box [0,1]^n.
///
/// Linear interpolation on a simplex of n+1 points, trust-region steps of
/// radius rho, and geometry-improving steps when the simplex degenerates, in
/// the manner of COBYLA restricted to bound constraints. Non-finite objective
/// values are replaced by a large penalty.
CobylaResult cobyla_minimize(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x0,
                             const CobylaOptions& options = {});

}  // namespace ccbo::gp
