#include "ccbo/gp/point_set.hpp"

#include "ccbo/errors.hpp"

#include <algorithm>
#include <numeric>

namespace ccbo::gp {

PointSet::PointSet(Eigen::MatrixXd coords, std::vector<int> levels)
    : coords_(std::move(coords)), levels_(std::move(levels)) {
  if (!levels_.empty() && static_cast<Eigen::Index>(levels_.size()) != coords_.rows())
    throw ShapeError("PointSet: level count does not match row count");
}

PointSet PointSet::from_points(std::span<const JointPoint> points) {
  if (points.empty()) return {};
  const Eigen::Index dx = points.front().x.size();
  const Eigen::Index du = points.front().u.size();
  const bool leveled = points.front().level.has_value();
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(points.size()), dx + du);
  std::vector<int> levels;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.x.size() != dx || p.u.size() != du || p.level.has_value() != leveled)
      throw ShapeError("PointSet::from_points: inconsistent point shapes");
    const auto r = static_cast<Eigen::Index>(i);
    coords.row(r).head(dx) = p.x.transpose();
    coords.row(r).tail(du) = p.u.transpose();
    if (leveled) levels.push_back(*p.level);
  }
  return PointSet(std::move(coords), std::move(levels));
}

PointSet PointSet::expand(const Eigen::VectorXd& x, const Eigen::MatrixXd& nodes, int n_levels) {
  const Eigen::Index reps = std::max(n_levels, 1);
  const Eigen::Index rows = nodes.rows() * reps;
  Eigen::MatrixXd coords(rows, x.size() + nodes.cols());
  std::vector<int> levels;
  if (n_levels > 0) levels.reserve(static_cast<std::size_t>(rows));
  Eigen::Index r = 0;
  for (Eigen::Index j = 0; j < nodes.rows(); ++j) {
    for (Eigen::Index p = 0; p < reps; ++p, ++r) {
      coords.row(r).head(x.size()) = x.transpose();
      coords.row(r).tail(nodes.cols()) = nodes.row(j);
      if (n_levels > 0) levels.push_back(static_cast<int>(p));
    }
  }
  return PointSet(std::move(coords), std::move(levels));
}

void PointSet::append(const Eigen::VectorXd& row, std::optional<int> level) {
  if (coords_.rows() > 0 && row.size() != coords_.cols())
    throw ShapeError("PointSet::append: dimension mismatch");
  if (coords_.rows() > 0 && level.has_value() != has_levels())
    throw ShapeError("PointSet::append: level presence mismatch");
  coords_.conservativeResize(coords_.rows() + 1, row.size());
  coords_.row(coords_.rows() - 1) = row.transpose();
  if (level) levels_.push_back(*level);
}

void PointSet::append(const PointSet& other) {
  if (other.empty()) return;
  if (empty()) {
    *this = other;
    return;
  }
  if (other.dim() != dim() || other.has_levels() != has_levels())
    throw ShapeError("PointSet::append: incompatible point sets");
  const Eigen::Index n = coords_.rows();
  coords_.conservativeResize(n + other.size(), Eigen::NoChange);
  coords_.bottomRows(other.size()) = other.coords_;
  levels_.insert(levels_.end(), other.levels_.begin(), other.levels_.end());
}

PointSet PointSet::subset(std::span<const Eigen::Index> rows) const {
  Eigen::MatrixXd c(static_cast<Eigen::Index>(rows.size()), dim());
  std::vector<int> lv;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    c.row(static_cast<Eigen::Index>(i)) = coords_.row(rows[i]);
    if (has_levels()) lv.push_back(levels_[static_cast<std::size_t>(rows[i])]);
  }
  return PointSet(std::move(c), std::move(lv));
}

PointSet PointSet::with_level(int level) const {
  return PointSet(coords_, std::vector<int>(static_cast<std::size_t>(size()), level));
}

JointPoint PointSet::point(Eigen::Index i, Eigen::Index x_dim) const {
  JointPoint p;
  p.x = coords_.row(i).head(x_dim).transpose();
  p.u = coords_.row(i).tail(dim() - x_dim).transpose();
  if (has_levels()) p.level = level(i);
  return p;
}

std::vector<Eigen::Index> duplicate_rows(const PointSet& points) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(points.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& c = points.coords();
  auto less = [&](Eigen::Index a, Eigen::Index b) {
    if (points.level(a) != points.level(b)) return points.level(a) < points.level(b);
    for (Eigen::Index k = 0; k < c.cols(); ++k)
      if (c(a, k) != c(b, k)) return c(a, k) < c(b, k);
    return false;
  };
  std::sort(order.begin(), order.end(), less);
  std::vector<Eigen::Index> dups;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (!less(order[i - 1], order[i])) dups.push_back(order[i]);
  return dups;
}

}  // namespace ccbo::gp
