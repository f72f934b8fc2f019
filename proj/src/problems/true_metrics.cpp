#include "ccbo/problems/true_metrics.hpp"

#include "ccbo/errors.hpp"
#include "ccbo/seed.hpp"

#include <limits>

namespace ccbo::problems {

TrueMetrics::TrueMetrics(ProblemDefinition problem, Eigen::Index n_mc, std::uint64_t seed)
    : problem_(std::move(problem)) {
  problem_.validate();
  if (n_mc < 1) throw DomainError("TrueMetrics: n_mc must be positive");
  Rng rng(seed);
  u_ = problem_.u_sampler(n_mc, rng);
}

double TrueMetrics::mean_objective(const Eigen::VectorXd& x) const {
  double s = 0.0;
  for (Eigen::Index j = 0; j < u_.rows(); ++j) s += problem_.objective(x, u_.row(j).transpose());
  return s / static_cast<double>(u_.rows());
}

double TrueMetrics::pof(const Eigen::VectorXd& x) const {
  Eigen::Index ok = 0;
  Eigen::VectorXd u(u_.cols());
  for (Eigen::Index j = 0; j < u_.rows(); ++j) {
    u = u_.row(j).transpose();
    bool feasible = true;
    for (const auto& g : problem_.constraints) {
      if (g(x, u) > 0.0) {
        feasible = false;
        break;
      }
    }
    if (feasible) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(u_.rows());
}

ReferenceOptimum enumerate_optimum(const TrueMetrics& metrics, int per_dim) {
  const auto& p = metrics.problem();
  if (per_dim < 2) throw DomainError("enumerate_optimum: need at least two grid points per dimension");
  const Eigen::Index d = p.d();
  Eigen::Index total = 1;
  for (Eigen::Index k = 0; k < d; ++k) total *= per_dim;

  ReferenceOptimum best;
  best.value = std::numeric_limits<double>::infinity();
  const auto n = metrics.u_sample().rows();
  const auto max_fail = static_cast<Eigen::Index>((p.alpha) * static_cast<double>(n));
  Eigen::VectorXd x(d), u(p.m());
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index r = idx;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double t = static_cast<double>(r % per_dim) / (per_dim - 1);
      r /= per_dim;
      x[k] = p.x_lower[k] + t * (p.x_upper[k] - p.x_lower[k]);
    }
    // Feasibility with early exit once more than alpha * n samples fail.
    Eigen::Index fails = 0;
    for (Eigen::Index j = 0; j < n && fails <= max_fail; ++j) {
      u = metrics.u_sample().row(j).transpose();
      for (const auto& g : p.constraints)
        if (g(x, u) > 0.0) {
          ++fails;
          break;
        }
    }
    const double pof = 1.0 - static_cast<double>(fails) / static_cast<double>(n);
    if (fails > max_fail || pof < 1.0 - p.alpha) continue;
    const double v = metrics.mean_objective(x);
    if (v < best.value) best = {x, v, pof};
  }
  if (best.x.size() == 0) throw DataError("enumerate_optimum: no feasible grid point");
  return best;
}

ReferenceSettings reference_settings(const std::string& problem_name) {
  if (problem_name == "analytic-2d") return {100000, 10000, 0x2d2d2d};
  if (problem_name == "analytic-4d") return {20000, 201, 0x4d4d4d};
  throw ConfigError("no reference settings for problem '" + problem_name + "'");
}

ReferenceOptimum reference_optimum(const std::string& problem_name) {
  // Produced by enumerate_optimum(TrueMetrics(problem, n_mc, seed), per_dim)
  // with reference_settings(); the problems test recomputes them.
  ReferenceOptimum r;
  if (problem_name == "analytic-2d") {
    r.x = Eigen::VectorXd::Constant(1, 27.330333033303329);
    r.value = 107235.81056117036;
    r.pof = 0.95183;
  } else if (problem_name == "analytic-4d") {
    r.x.resize(2);
    r.x << -2.8, -3.6;
    r.value = 62.535604369767256;
    r.pof = 0.9503;
  } else {
    throw ConfigError("no reference optimum for problem '" + problem_name + "'");
  }
  return r;
}

}  // namespace ccbo::problems
