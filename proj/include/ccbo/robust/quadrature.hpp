#pragma once

#include "ccbo/seed.hpp"

#include <Eigen/Dense>

#include <functional>
#include <utility>

namespace ccbo::robust {

/// Draws n samples (rows) of the uncertain parameters.
using USampler = std::function<Eigen::MatrixXd(Eigen::Index n, Rng& rng)>;

/// Independent uniform sampler on a box.
USampler uniform_sampler(Eigen::VectorXd lower, Eigen::VectorXd upper);

enum class QuadratureScheme { kMonteCarlo, kTensor };

/// Nodes and weights approximating expectations over the uncertain parameters.
struct UncertaintyQuadrature {
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;
  QuadratureScheme scheme = QuadratureScheme::kMonteCarlo;

  Eigen::Index size() const { return nodes.rows(); }
  Eigen::Index dim() const { return nodes.cols(); }
  /// Throws ShapeError / DomainError on inconsistent sizes, negative weights
  /// or weights not summing to one.
  void validate() const;
};

/// M seeded samples with equal weights.
UncertaintyQuadrature monte_carlo_quadrature(const USampler& sampler, Eigen::Index m, std::uint64_t seed);

/// Tensor Gauss-Legendre rule for a uniform density on a box of dimension <= 2.
UncertaintyQuadrature tensor_quadrature(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, int per_dim);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n);

}  // namespace ccbo::robust
