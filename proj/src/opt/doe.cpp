#include "ccbo/opt/doe.hpp"

#include "ccbo/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace ccbo::opt {

Eigen::MatrixXd latin_hypercube(Eigen::Index n, Eigen::Index dim, Rng& rng) {
  if (n < 1 || dim < 1) throw DomainError("latin_hypercube: need positive size and dimension");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd out(n, dim);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < dim; ++j) {
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (Eigen::Index i = 0; i < n; ++i)
      out(i, j) = (static_cast<double>(perm[static_cast<std::size_t>(i)]) + unif(rng)) / static_cast<double>(n);
  }
  return out;
}

double min_distance(const Eigen::MatrixXd& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index k = i + 1; k < pts.rows(); ++k) best = std::min(best, (pts.row(i) - pts.row(k)).squaredNorm());
  return std::sqrt(best);
}

Eigen::MatrixXd maximin_lhs(Eigen::Index n, Eigen::Index dim, std::uint64_t seed, int swaps) {
  Rng rng(seed);
  Eigen::MatrixXd best = latin_hypercube(n, dim, rng);
  if (n < 2) return best;
  double best_d = min_distance(best);
  for (int k = 0; k < 9; ++k) {
    Eigen::MatrixXd cand = latin_hypercube(n, dim, rng);
    const double d = min_distance(cand);
    if (d > best_d) {
      best = std::move(cand);
      best_d = d;
    }
  }
  std::uniform_int_distribution<Eigen::Index> row(0, n - 1), col(0, dim - 1);
  for (int s = 0; s < swaps; ++s) {
    const Eigen::Index a = row(rng), b = row(rng), c = col(rng);
    if (a == b) continue;
    std::swap(best(a, c), best(b, c));
    const double d = min_distance(best);
    if (d > best_d) {
      best_d = d;
    } else {
      std::swap(best(a, c), best(b, c));
    }
  }
  return best;
}

Eigen::MatrixXd scale_to_box(const Eigen::MatrixXd& unit, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  if (unit.cols() != lower.size() || upper.size() != lower.size()) throw ShapeError("scale_to_box: dimension mismatch");
  return ((unit.array().rowwise() * (upper - lower).transpose().array()).rowwise() + lower.transpose().array()).matrix();
}

InitialDesign init_doe(const problems::ProblemDefinition& problem, Eigen::Index t_init, std::uint64_t seed) {
  problem.validate();
  if (t_init < 2) throw ConfigError("init_doe: t_init must be at least 2");
  const Eigen::Index d = problem.d();
  const Eigen::MatrixXd unit = maximin_lhs(t_init, d + problem.m(), derive_seed(seed, {tag(Stream::kDoe)}));
  InitialDesign out;
  out.x = scale_to_box(unit.leftCols(d), problem.x_lower, problem.x_upper);
  Rng rng(derive_seed(seed, {tag(Stream::kDoeU)}));
  out.u = problem.u_sampler(t_init, rng);
  return out;
}

}  // namespace ccbo::opt
