#include "ccbo/gp/constraint_model.hpp"

#include "ccbo/errors.hpp"

namespace ccbo::gp {

namespace {

std::vector<std::vector<Eigen::Index>> rows_by_level(const PointSet& q, int levels) {
  if (!q.empty() && !q.has_levels()) throw ShapeError("ConstraintModel: points must carry constraint levels");
  std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(levels));
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const int l = q.level(i);
    if (l < 0 || l >= levels) throw ShapeError("ConstraintModel: level out of range");
    out[static_cast<std::size_t>(l)].push_back(i);
  }
  return out;
}

}  // namespace

ConstraintModel ConstraintModel::independent(std::vector<GpModel> models) {
  if (models.empty()) throw ShapeError("ConstraintModel: need at least one constraint model");
  for (const auto& m : models)
    if (m.kernel().multi_output()) throw ShapeError("ConstraintModel::independent: models must be scalar");
  ConstraintModel c;
  c.n_outputs_ = static_cast<int>(models.size());
  c.models_ = std::move(models);
  return c;
}

ConstraintModel ConstraintModel::coupled(GpModel model) {
  if (!model.kernel().multi_output()) throw ShapeError("ConstraintModel::coupled: model must be multi-output");
  ConstraintModel c;
  c.n_outputs_ = model.n_levels();
  c.coupled_ = true;
  c.models_.push_back(std::move(model));
  return c;
}

const GpModel& ConstraintModel::model(int level) const {
  return coupled_ ? models_.front() : models_.at(static_cast<std::size_t>(level));
}

Eigen::VectorXd ConstraintModel::mean(const PointSet& q) const {
  if (coupled_) return models_.front().mean(q);
  Eigen::VectorXd mu(q.size());
  const auto groups = rows_by_level(q, n_outputs_);
  for (int l = 0; l < n_outputs_; ++l) {
    const auto& rows = groups[static_cast<std::size_t>(l)];
    if (rows.empty()) continue;
    const Eigen::VectorXd m = models_[static_cast<std::size_t>(l)].mean(q.subset(rows).without_levels());
    for (std::size_t k = 0; k < rows.size(); ++k) mu[rows[k]] = m[static_cast<Eigen::Index>(k)];
  }
  return mu;
}

Eigen::MatrixXd ConstraintModel::covariance(const PointSet& a, const PointSet& b) const {
  if (coupled_) return models_.front().covariance(a, b);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(a.size(), b.size());
  const auto ga = rows_by_level(a, n_outputs_);
  const auto gb = (&a == &b) ? ga : rows_by_level(b, n_outputs_);
  for (int l = 0; l < n_outputs_; ++l) {
    const auto& ra = ga[static_cast<std::size_t>(l)];
    const auto& rb = gb[static_cast<std::size_t>(l)];
    if (ra.empty() || rb.empty()) continue;
    const auto& m = models_[static_cast<std::size_t>(l)];
    const PointSet sa = a.subset(ra).without_levels();
    const Eigen::MatrixXd Cl = (&a == &b) ? m.covariance(sa, sa) : m.covariance(sa, b.subset(rb).without_levels());
    for (std::size_t i = 0; i < ra.size(); ++i)
      for (std::size_t j = 0; j < rb.size(); ++j)
        C(ra[i], rb[j]) = Cl(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return C;
}

Prediction ConstraintModel::predict(const PointSet& q) const {
  return {mean(q), covariance(q, q)};
}

std::vector<Eigen::MatrixXd> ConstraintModel::block_covariances(const PointSet& q, Eigen::Index block) const {
  if (coupled_) return models_.front().block_covariances(q, block);
  if (block <= 0 || q.size() % block != 0) throw ShapeError("block_covariances: size is not a multiple of block");
  // Per-level variances assembled into diagonal blocks (cross-level terms are zero
  // unless a block holds two rows of the same level).
  std::vector<Eigen::MatrixXd> out;
  for (Eigen::Index start = 0; start < q.size(); start += block) {
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(block));
    for (Eigen::Index k = 0; k < block; ++k) rows[static_cast<std::size_t>(k)] = start + k;
    const PointSet g = q.subset(rows);
    out.push_back(covariance(g, g));
  }
  return out;
}

Eigen::MatrixXd ConstraintModel::one_step_update_cov(const PointSet& pending, const PointSet& queries) const {
  if (coupled_) return models_.front().one_step_update_cov(pending, queries);
  if (pending.empty()) throw ShapeError("one_step_update_cov: pending set is empty");
  Eigen::MatrixXd out = covariance(queries, queries);
  const auto gp = rows_by_level(pending, n_outputs_);
  const auto gq = rows_by_level(queries, n_outputs_);
  for (int l = 0; l < n_outputs_; ++l) {
    const auto& rp = gp[static_cast<std::size_t>(l)];
    const auto& rq = gq[static_cast<std::size_t>(l)];
    if (rp.empty() || rq.empty()) continue;
    const Eigen::MatrixXd U = models_[static_cast<std::size_t>(l)].one_step_update_cov(
        pending.subset(rp).without_levels(), queries.subset(rq).without_levels());
    for (std::size_t i = 0; i < rq.size(); ++i)
      for (std::size_t j = 0; j < rq.size(); ++j)
        out(rq[i], rq[j]) = U(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return out;
}

double ConstraintModel::jitter_variance(int level) const {
  return coupled_ ? models_.front().jitter_variance(level) : models_.at(static_cast<std::size_t>(level)).jitter_variance(0);
}

Eigen::Index ConstraintModel::total_rows() const {
  Eigen::Index n = 0;
  for (const auto& m : models_) n += m.size();
  return n;
}

}  // namespace ccbo::gp
