#include "ccbo/gp/kernel.hpp"

#include "ccbo/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ccbo::gp {

void KernelSpec::validate() const {
  if (!(variance > 0.0) || !std::isfinite(variance)) throw DomainError("kernel variance must be positive");
  for (Eigen::Index i = 0; i < lengthscales.size(); ++i)
    if (!(lengthscales[i] > 0.0) || !std::isfinite(lengthscales[i]))
      throw DomainError("kernel lengthscale " + std::to_string(i) + " must be positive");
  if (n_levels < 0) throw DomainError("negative level count");
  if (angles.size() != angle_count(n_levels)) throw DomainError("wrong number of hypersphere angles");
  for (double a : angles)
    if (!(a >= -std::numbers::pi && a <= std::numbers::pi)) throw DomainError("hypersphere angle outside [-pi, pi]");
  if (n_levels > 0 && !(level_variance > 0.0)) throw DomainError("level variance must be positive");
}

KernelSpec KernelSpec::scalar(Eigen::Index dim, double lengthscale) {
  KernelSpec s;
  s.lengthscales = Eigen::VectorXd::Constant(dim, lengthscale);
  return s;
}

KernelSpec KernelSpec::multi_output(Eigen::Index dim, int n_levels, double lengthscale) {
  KernelSpec s = scalar(dim, lengthscale);
  s.n_levels = n_levels;
  // pi/2 everywhere maps the levels to orthogonal axes: T = identity.
  s.angles.assign(angle_count(n_levels), std::numbers::pi / 2);
  return s;
}

Eigen::MatrixXd hypersphere_factor(std::span<const double> angles, int n_levels, double level_variance) {
  if (n_levels < 1) throw DomainError("hypersphere: need at least one level");
  if (angles.size() != angle_count(n_levels)) throw DomainError("hypersphere: wrong number of angles");
  if (!(level_variance > 0.0)) throw DomainError("hypersphere: level variance must be positive");
  for (double a : angles)
    if (!(a >= -std::numbers::pi && a <= std::numbers::pi)) throw DomainError("hypersphere angle outside [-pi, pi]");

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n_levels, n_levels);
  L(0, 0) = 1.0;
  std::size_t offset = 0;
  for (int m = 1; m < n_levels; ++m) {
    double sin_prod = 1.0;
    for (int d = 0; d < m; ++d) {
      const double theta = angles[offset + static_cast<std::size_t>(d)];
      L(m, d) = std::cos(theta) * sin_prod;
      sin_prod *= std::sin(theta);
    }
    L(m, m) = sin_prod;
    offset += static_cast<std::size_t>(m);
  }
  return std::sqrt(level_variance) * L;
}

Eigen::MatrixXd hypersphere_matrix(std::span<const double> angles, int n_levels, double level_variance) {
  const Eigen::MatrixXd L = hypersphere_factor(angles, n_levels, level_variance);
  Eigen::MatrixXd T = L * L.transpose();
  // Exact diagonal; the row norms are sigma_z^2 up to rounding.
  T.diagonal().setConstant(level_variance);
  return T;
}

namespace {

Eigen::MatrixXd level_matrix(const KernelSpec& spec) {
  if (spec.n_levels == 0) return Eigen::MatrixXd::Ones(1, 1);
  return hypersphere_matrix(spec.angles, spec.n_levels, spec.level_variance);
}

void check_level(const KernelSpec& spec, std::optional<int> level) {
  if (spec.multi_output() != level.has_value())
    throw ShapeError("kernel: level index present iff the kernel has discrete levels");
  if (level && (*level < 0 || *level >= spec.n_levels)) throw ShapeError("kernel: level index out of range");
}

}  // namespace

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& a, std::optional<int> level_a,
                   const Eigen::Ref<const Eigen::VectorXd>& b, std::optional<int> level_b) {
  if (a.size() != spec.input_dim() || b.size() != spec.input_dim())
    throw ShapeError("kernel: point dimension does not match lengthscales");
  check_level(spec, level_a);
  check_level(spec, level_b);
  const double r2 = ((a - b).array() / spec.lengthscales.array()).square().sum();
  double k = spec.variance * std::exp(-0.5 * r2);
  if (spec.multi_output()) k *= level_matrix(spec)(*level_a, *level_b);
  return k;
}

double kernel_eval(const KernelSpec& spec, const JointPoint& a, const JointPoint& b) {
  Eigen::VectorXd za(a.x.size() + a.u.size()), zb(b.x.size() + b.u.size());
  za << a.x, a.u;
  zb << b.x, b.u;
  return kernel_eval(spec, za, a.level, zb, b.level);
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const PointSet& a, const PointSet& b) {
  const Eigen::Index dim = spec.input_dim();
  if ((!a.empty() && a.dim() != dim) || (!b.empty() && b.dim() != dim))
    throw ShapeError("kernel_matrix: point dimension does not match lengthscales");
  if (spec.multi_output() && ((!a.empty() && !a.has_levels()) || (!b.empty() && !b.has_levels())))
    throw ShapeError("kernel_matrix: multi-output kernel needs leveled points");

  const Eigen::ArrayXd inv_ls = spec.lengthscales.array().inverse();
  Eigen::MatrixXd sa = (a.coords().array().rowwise() * inv_ls.transpose()).matrix();
  Eigen::MatrixXd sb = (b.coords().array().rowwise() * inv_ls.transpose()).matrix();
  Eigen::MatrixXd d2(a.size(), b.size());
  for (Eigen::Index j = 0; j < b.size(); ++j) d2.col(j) = (sa.rowwise() - sb.row(j)).rowwise().squaredNorm();
  Eigen::MatrixXd K = spec.variance * (-0.5 * d2.array()).exp().matrix();

  if (spec.multi_output()) {
    const Eigen::MatrixXd T = level_matrix(spec);
    for (Eigen::Index j = 0; j < K.cols(); ++j) {
      const int lb = b.level(j);
      for (Eigen::Index i = 0; i < K.rows(); ++i) K(i, j) *= T(a.level(i), lb);
    }
  }
  return K;
}

}  // namespace ccbo::gp
