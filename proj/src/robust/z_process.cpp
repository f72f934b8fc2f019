#include "ccbo/robust/z_process.hpp"

#include "ccbo/errors.hpp"

namespace ccbo::robust {

ZProcess::ZProcess(const gp::GpModel& objective, const UncertaintyQuadrature& quad) : model_(&objective) {
  const auto& spec = objective.kernel();
  if (spec.multi_output()) throw ShapeError("ZProcess: objective model must be scalar");
  quad.validate();
  const Eigen::Index dim = spec.input_dim();
  const Eigen::Index m = quad.dim();
  d_ = dim - m;
  if (d_ < 1) throw ShapeError("ZProcess: quadrature dimension leaves no design variables");

  const Eigen::ArrayXd inv_ls = spec.lengthscales.array().inverse();
  const auto& box = objective.box();
  const Eigen::ArrayXd u_lo = box.lower.tail(m).array();
  const Eigen::ArrayXd u_w = (box.upper - box.lower).tail(m).array();
  nodes_u_ = (((quad.nodes.array().rowwise() - u_lo.transpose()).rowwise() / u_w.transpose()).rowwise() *
              inv_ls.tail(m).transpose())
                 .matrix();
  weights_ = quad.weights;
  s_uu_ = weights_.dot(se(nodes_u_, nodes_u_) * weights_);

  const Eigen::MatrixXd& D = objective.model_inputs().coords();
  if (D.rows() > 0) {
    data_x_ = (D.leftCols(d_).array().rowwise() * inv_ls.head(d_).transpose()).matrix();
    data_u_ = (D.rightCols(m).array().rowwise() * inv_ls.tail(m).transpose()).matrix();
    h_ = se(data_u_, nodes_u_) * weights_;
  } else {
    data_x_.resize(0, d_);
    h_.resize(0);
  }
  shift_ = objective.scaling().shift.front();
  scale_ = objective.scaling().scale.front();
}

Eigen::MatrixXd ZProcess::se(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j)
    out.col(j) = (-0.5 * (a.rowwise() - b.row(j)).rowwise().squaredNorm()).array().exp().matrix();
  return out;
}

Eigen::MatrixXd ZProcess::normalize_x(const Eigen::MatrixXd& xs) const {
  if (xs.cols() != d_) throw ShapeError("ZProcess: design dimension mismatch");
  const auto& box = model_->box();
  const auto& ls = model_->kernel().lengthscales;
  const Eigen::ArrayXd lo = box.lower.head(d_).array();
  const Eigen::ArrayXd w = ((box.upper - box.lower).head(d_).array()) * ls.head(d_).array();
  return ((xs.array().rowwise() - lo.transpose()).rowwise() / w.transpose()).matrix();
}

Eigen::MatrixXd ZProcess::kbar(const Eigen::MatrixXd& xs_scaled) const {
  return model_->kernel().variance * (h_.asDiagonal() * se(data_x_, xs_scaled));
}

Eigen::VectorXd ZProcess::mean(const Eigen::MatrixXd& xs) const {
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(xs.rows(), model_->kernel().prior_mean);
  if (model_->size() > 0) mu += kbar(normalize_x(xs)).transpose() * model_->weights();
  return (shift_ + scale_ * mu.array()).matrix();
}

Eigen::VectorXd ZProcess::variance(const Eigen::MatrixXd& xs) const {
  Eigen::VectorXd v = Eigen::VectorXd::Constant(xs.rows(), model_->kernel().variance * s_uu_);
  if (model_->size() > 0) {
    Eigen::MatrixXd W = kbar(normalize_x(xs));
    model_->cholesky_lower().triangularView<Eigen::Lower>().solveInPlace(W);
    v -= W.colwise().squaredNorm().transpose();
  }
  return (v.array().max(0.0) * scale_ * scale_).matrix();
}

Eigen::MatrixXd ZProcess::covariance(const Eigen::MatrixXd& xa, const Eigen::MatrixXd& xb) const {
  const Eigen::MatrixXd a = normalize_x(xa);
  const Eigen::MatrixXd b = normalize_x(xb);
  Eigen::MatrixXd C = model_->kernel().variance * s_uu_ * se(a, b);
  if (model_->size() > 0) {
    const auto L = model_->cholesky_lower().triangularView<Eigen::Lower>();
    Eigen::MatrixXd Wa = kbar(a);
    L.solveInPlace(Wa);
    Eigen::MatrixXd Wb = kbar(b);
    L.solveInPlace(Wb);
    C.noalias() -= Wa.transpose() * Wb;
  }
  return scale_ * scale_ * C;
}

Eigen::VectorXd ZProcess::cross_covariance(const Eigen::VectorXd& x, const gp::PointSet& points) const {
  const Eigen::Index m = nodes_u_.cols();
  const gp::PointSet pm = model_->to_model_units(points);
  const Eigen::ArrayXd inv_ls = model_->kernel().lengthscales.array().inverse();
  const Eigen::MatrixXd px = (pm.coords().leftCols(d_).array().rowwise() * inv_ls.head(d_).transpose()).matrix();
  const Eigen::MatrixXd pu = (pm.coords().rightCols(m).array().rowwise() * inv_ls.tail(m).transpose()).matrix();
  const Eigen::MatrixXd xs = normalize_x(x.transpose());

  // Prior: sigma^2 e_x(x, x_p) sum_j w_j e_u(u_j, u_p).
  const Eigen::VectorXd hu = se(pu, nodes_u_) * weights_;
  Eigen::VectorXd c = model_->kernel().variance * (se(px, xs).col(0).array() * hu.array()).matrix();
  if (model_->size() > 0) {
    const auto L = model_->cholesky_lower().triangularView<Eigen::Lower>();
    Eigen::MatrixXd wz = kbar(xs);
    L.solveInPlace(wz);
    const Eigen::MatrixXd wp = model_->whiten(pm);
    c.noalias() -= wp.transpose() * wz.col(0);
  }
  return scale_ * scale_ * c;
}

}  // namespace ccbo::robust
