#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace ccbo::gp {

/// A point of the joint design/uncertainty space. `level` is the 0-based
/// output index when the point addresses a multi-output model.
struct JointPoint {
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  std::optional<int> level;
};

/// Batch of joint points stored row-wise as [x | u], with an optional
/// per-row output level. Either every row carries a level or none does.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(Eigen::MatrixXd coords, std::vector<int> levels = {});

  static PointSet from_points(std::span<const JointPoint> points);

  /// All (x, u_j, p) for j over the rows of `nodes` and p in [0, n_levels),
  /// ordered node-major. With n_levels == 0 the rows carry no level.
  static PointSet expand(const Eigen::VectorXd& x, const Eigen::MatrixXd& nodes, int n_levels);

  Eigen::Index size() const { return coords_.rows(); }
  Eigen::Index dim() const { return coords_.cols(); }
  bool empty() const { return coords_.rows() == 0; }
  bool has_levels() const { return !levels_.empty(); }

  const Eigen::MatrixXd& coords() const { return coords_; }
  const std::vector<int>& levels() const { return levels_; }
  int level(Eigen::Index i) const { return levels_.empty() ? 0 : levels_[static_cast<std::size_t>(i)]; }

  void append(const Eigen::VectorXd& row, std::optional<int> level = std::nullopt);
  void append(const PointSet& other);

  PointSet subset(std::span<const Eigen::Index> rows) const;
  PointSet without_levels() const { return PointSet(coords_); }
  PointSet with_level(int level) const;

  JointPoint point(Eigen::Index i, Eigen::Index x_dim) const;

 private:
  Eigen::MatrixXd coords_;
  std::vector<int> levels_;
};

/// Indices of rows that appear more than once (same coordinates and level).
std::vector<Eigen::Index> duplicate_rows(const PointSet& points);

}  // namespace ccbo::gp
