#include "ccbo/robust/feasibility.hpp"

#include "ccbo/errors.hpp"
#include "ccbo/gp/linalg.hpp"
#include "ccbo/seed.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace ccbo::robust {

namespace {

constexpr double kShareTol = 1e-12;

gp::PointSet constraint_points(const gp::ConstraintModel& model, const Eigen::VectorXd& x,
                               const UncertaintyQuadrature& quad) {
  return gp::PointSet::expand(x, quad.nodes, model.n_outputs());
}

}  // namespace

Eigen::MatrixXd trajectory_normals(Eigen::Index rows, int n_traj, std::uint64_t seed) {
  if (n_traj < 1) throw DomainError("trajectory_normals: n_traj must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(rows, n_traj);
  for (Eigen::Index j = 0; j < z.cols(); ++j)
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = normal(rng);
  return z;
}

double pof_trajectories(const gp::ConstraintModel& model, const Eigen::VectorXd& x, const UncertaintyQuadrature& quad,
                        double alpha, const Eigen::MatrixXd& normals) {
  quad.validate();
  const int l = model.n_outputs();
  const Eigen::Index M = quad.size();
  if (normals.rows() != M * l || normals.cols() < 1) throw ShapeError("pof_trajectories: normals have the wrong shape");
  const gp::PointSet q = constraint_points(model, x, quad);
  const gp::Prediction pred = model.predict(q);
  const gp::CovarianceFactor f = gp::factor_covariance(pred.cov);
  Eigen::MatrixXd draws = f.lower * normals;
  draws.colwise() += pred.mean;

  const double need = 1.0 - alpha - kShareTol;
  Eigen::Index feasible = 0;
  for (Eigen::Index k = 0; k < draws.cols(); ++k) {
    double share = 0.0;
    for (Eigen::Index j = 0; j < M; ++j) {
      bool ok = true;
      for (int p = 0; p < l && ok; ++p) ok = draws(j * l + p, k) <= 0.0;
      if (ok) share += quad.weights[j];
    }
    if (share >= need) ++feasible;
  }
  return static_cast<double>(feasible) / static_cast<double>(draws.cols());
}

FeasibilityEstimate pof_trajectories(const gp::ConstraintModel& model, const Eigen::VectorXd& x,
                                     const UncertaintyQuadrature& quad, int n_traj, double alpha, std::uint64_t seed) {
  const Eigen::MatrixXd z = trajectory_normals(quad.size() * model.n_outputs(), n_traj, seed);
  FeasibilityEstimate est;
  est.pof = pof_trajectories(model, x, quad, alpha, z);
  est.expected_c = expected_c(model, x, quad, alpha);
  est.n_traj = n_traj;
  est.n_u = quad.size();
  return est;
}

double integrated_feasibility(const gp::ConstraintModel& model, const Eigen::VectorXd& x,
                              const UncertaintyQuadrature& quad, const MvnOptions& mvn) {
  quad.validate();
  const int l = model.n_outputs();
  const gp::PointSet q = constraint_points(model, x, quad);
  const Eigen::VectorXd mu = model.mean(q);
  const auto blocks = model.block_covariances(q, l);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(l);
  double total = 0.0;
  for (Eigen::Index j = 0; j < quad.size(); ++j)
    total += quad.weights[j] * mvn_cdf(mu.segment(j * l, l), blocks[static_cast<std::size_t>(j)], zero, mvn).value;
  return std::clamp(total, 0.0, 1.0);
}

double expected_c(const gp::ConstraintModel& model, const Eigen::VectorXd& x, const UncertaintyQuadrature& quad,
                  double alpha, const MvnOptions& mvn) {
  return 1.0 - alpha - integrated_feasibility(model, x, quad, mvn);
}

Incumbent incumbent_feasible_min(const ZProcess& z, const gp::ConstraintModel& model, const Eigen::MatrixXd& candidates,
                                 const UncertaintyQuadrature& quad, double alpha, const MvnOptions& mvn) {
  if (candidates.rows() == 0) throw ShapeError("incumbent_feasible_min: empty candidate set");
  const Eigen::VectorXd mz = z.mean(candidates);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(candidates.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return mz[a] < mz[b]; });

  Incumbent best;
  double best_feas = -1.0;
  for (Eigen::Index i : order) {
    const double feas = integrated_feasibility(model, candidates.row(i).transpose(), quad, mvn);
    const double ec = 1.0 - alpha - feas;
    if (ec <= 0.0) {
      return {mz[i], i, candidates.row(i).transpose(), ec, false};
    }
    if (feas > best_feas || (feas == best_feas && i < best.index)) {
      best_feas = feas;
      best = {mz[i], i, candidates.row(i).transpose(), ec, true};
    }
  }
  return best;
}

}  // namespace ccbo::robust
