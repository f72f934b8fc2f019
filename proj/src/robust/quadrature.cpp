#include "ccbo/robust/quadrature.hpp"

#include "ccbo/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace ccbo::robust {

USampler uniform_sampler(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  if (lower.size() != upper.size()) throw ShapeError("uniform_sampler: bound sizes differ");
  if (((upper - lower).array() <= 0.0).any()) throw DomainError("uniform_sampler: empty box");
  return [lower = std::move(lower), upper = std::move(upper)](Eigen::Index n, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::MatrixXd out(n, lower.size());
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < lower.size(); ++j) out(i, j) = lower[j] + (upper[j] - lower[j]) * unif(rng);
    return out;
  };
}

void UncertaintyQuadrature::validate() const {
  if (nodes.rows() == 0) throw ShapeError("UncertaintyQuadrature: no nodes");
  if (weights.size() != nodes.rows()) throw ShapeError("UncertaintyQuadrature: weights and nodes differ in count");
  if ((weights.array() < 0.0).any()) throw DomainError("UncertaintyQuadrature: negative weight");
  if (std::abs(weights.sum() - 1.0) > 1e-12) throw DomainError("UncertaintyQuadrature: weights do not sum to one");
}

UncertaintyQuadrature monte_carlo_quadrature(const USampler& sampler, Eigen::Index m, std::uint64_t seed) {
  if (m < 1) throw DomainError("monte_carlo_quadrature: need at least one node");
  Rng rng(seed);
  UncertaintyQuadrature q;
  q.nodes = sampler(m, rng);
  q.weights = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  q.scheme = QuadratureScheme::kMonteCarlo;
  return q;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need n >= 1");
  Eigen::VectorXd x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[n - 1 - i] = z;
    w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

UncertaintyQuadrature tensor_quadrature(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, int per_dim) {
  const Eigen::Index m = lower.size();
  if (m < 1 || m > 2 || upper.size() != m) throw ShapeError("tensor_quadrature: dimension must be 1 or 2");
  const auto [x, w] = gauss_legendre(per_dim);
  const Eigen::Index total = m == 1 ? per_dim : per_dim * per_dim;
  UncertaintyQuadrature q;
  q.nodes.resize(total, m);
  q.weights.resize(total);
  q.scheme = QuadratureScheme::kTensor;
  auto map = [&](Eigen::Index j, double t) { return lower[j] + 0.5 * (upper[j] - lower[j]) * (t + 1.0); };
  Eigen::Index r = 0;
  for (int a = 0; a < per_dim; ++a) {
    if (m == 1) {
      q.nodes(r, 0) = map(0, x[a]);
      q.weights[r++] = 0.5 * w[a];
      continue;
    }
    for (int b = 0; b < per_dim; ++b) {
      q.nodes(r, 0) = map(0, x[a]);
      q.nodes(r, 1) = map(1, x[b]);
      q.weights[r++] = 0.25 * w[a] * w[b];
    }
  }
  q.weights /= q.weights.sum();
  return q;
}

}  // namespace ccbo::robust
