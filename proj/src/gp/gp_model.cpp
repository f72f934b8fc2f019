#include "ccbo/gp/gp_model.hpp"

#include "ccbo/errors.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

namespace ccbo::gp {

InputBox InputBox::unit(Eigen::Index dim) {
  return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
}

Eigen::MatrixXd InputBox::normalize(const Eigen::MatrixXd& coords) const {
  if (coords.rows() > 0 && coords.cols() != dim()) throw ShapeError("InputBox: coordinate dimension mismatch");
  const Eigen::ArrayXd width = (upper - lower).array();
  return ((coords.array().rowwise() - lower.transpose().array()).rowwise() / width.transpose()).matrix();
}

bool InputBox::contains(const Eigen::VectorXd& z) const {
  return z.size() == dim() && (z.array() >= lower.array()).all() && (z.array() <= upper.array()).all();
}

OutputScaling OutputScaling::identity(int channels) {
  OutputScaling s;
  s.shift.assign(static_cast<std::size_t>(channels), 0.0);
  s.scale.assign(static_cast<std::size_t>(channels), 1.0);
  return s;
}

OutputScaling OutputScaling::fit(const PointSet& inputs, const Eigen::VectorXd& outputs, int channels) {
  OutputScaling s = identity(channels);
  for (int c = 0; c < channels; ++c) {
    double sum = 0.0, sq = 0.0;
    int n = 0;
    for (Eigen::Index i = 0; i < outputs.size(); ++i) {
      if (inputs.level(i) != c) continue;
      sum += outputs[i];
      ++n;
    }
    if (n == 0) continue;
    const double mean = sum / n;
    for (Eigen::Index i = 0; i < outputs.size(); ++i)
      if (inputs.level(i) == c) sq += (outputs[i] - mean) * (outputs[i] - mean);
    const double sd = n > 1 ? std::sqrt(sq / (n - 1)) : 0.0;
    s.shift[static_cast<std::size_t>(c)] = mean;
    s.scale[static_cast<std::size_t>(c)] = sd > 1e-12 * (1.0 + std::abs(mean)) ? sd : 1.0;
  }
  return s;
}

Eigen::VectorXd OutputScaling::standardize(const PointSet& inputs, const Eigen::VectorXd& outputs) const {
  Eigen::VectorXd y(outputs.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const auto c = static_cast<std::size_t>(inputs.level(i));
    y[i] = (outputs[i] - shift[c]) / scale[c];
  }
  return y;
}

GpModel GpModel::condition(const KernelSpec& spec, const InputBox& box, PointSet inputs, Eigen::VectorXd outputs,
                           const GpOptions& options) {
  const int channels = std::max(spec.n_levels, 1);
  OutputScaling scaling =
      options.standardize_outputs ? OutputScaling::fit(inputs, outputs, channels) : OutputScaling::identity(channels);
  return condition(spec, box, std::move(inputs), std::move(outputs), scaling, options.jitter);
}

GpModel GpModel::condition(const KernelSpec& spec, const InputBox& box, PointSet inputs, Eigen::VectorXd outputs,
                           const OutputScaling& scaling, const JitterPolicy& jitter) {
  spec.validate();
  if (box.dim() != spec.input_dim()) throw ShapeError("GpModel: box dimension differs from kernel dimension");
  if (inputs.size() != outputs.size()) throw ShapeError("GpModel: inputs and outputs differ in length");
  if (!inputs.empty() && inputs.dim() != spec.input_dim()) throw ShapeError("GpModel: input dimension mismatch");
  if (!inputs.empty() && inputs.has_levels() != spec.multi_output())
    throw ShapeError("GpModel: levels must be present iff the kernel is multi-output");
  if (!outputs.allFinite()) throw DataError("GpModel: non-finite observations");
  for (Eigen::Index i = 0; i < inputs.size(); ++i)
    if (spec.multi_output() && (inputs.level(i) < 0 || inputs.level(i) >= spec.n_levels))
      throw ShapeError("GpModel: level index out of range");
  if (!duplicate_rows(inputs).empty()) throw DataError("GpModel: exact duplicate rows in conditioning data");

  GpModel m;
  m.spec_ = spec;
  m.box_ = box;
  m.scaling_ = scaling;
  m.inputs_ = std::move(inputs);
  m.outputs_ = std::move(outputs);
  m.model_inputs_ = m.to_model_units(m.inputs_);
  m.y_std_ = m.scaling_.standardize(m.inputs_, m.outputs_);

  const Eigen::Index n = m.inputs_.size();
  if (n == 0) {
    m.lower_.resize(0, 0);
    m.alpha_.resize(0);
    return m;
  }
  const Eigen::MatrixXd K = kernel_matrix(spec, m.model_inputs_, m.model_inputs_);
  auto jc = jittered_cholesky(K, spec.variance, jitter);
  m.jitter_ = jc.jitter;
  m.lower_ = jc.llt.matrixL();
  const Eigen::VectorXd r = m.y_std_.array() - spec.prior_mean;
  m.alpha_ = jc.llt.solve(r);
  return m;
}

PointSet GpModel::to_model_units(const PointSet& q) const {
  if (q.empty()) return PointSet(Eigen::MatrixXd(0, spec_.input_dim()), {});
  return PointSet(box_.normalize(q.coords()), q.levels());
}

void GpModel::check_query(const PointSet& q) const {
  if (q.empty()) return;
  if (q.dim() != spec_.input_dim()) throw ShapeError("GpModel: query dimension mismatch");
  if (q.has_levels() != spec_.multi_output()) throw ShapeError("GpModel: query levels must match the kernel");
}

Eigen::VectorXd GpModel::scales_for(const PointSet& q) const {
  Eigen::VectorXd s(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) s[i] = scaling_.scale[static_cast<std::size_t>(q.level(i))];
  return s;
}

Eigen::MatrixXd GpModel::whiten(const PointSet& q_model) const {
  if (size() == 0) return Eigen::MatrixXd(0, q_model.size());
  Eigen::MatrixXd V = kernel_matrix(spec_, model_inputs_, q_model);
  lower_.triangularView<Eigen::Lower>().solveInPlace(V);
  return V;
}

Eigen::VectorXd GpModel::mean(const PointSet& q) const {
  check_query(q);
  const PointSet qm = to_model_units(q);
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(q.size(), spec_.prior_mean);
  if (size() > 0) mu += kernel_matrix(spec_, qm, model_inputs_) * alpha_;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const auto c = static_cast<std::size_t>(q.level(i));
    mu[i] = scaling_.shift[c] + scaling_.scale[c] * mu[i];
  }
  return mu;
}

Eigen::MatrixXd GpModel::covariance_model(const PointSet& am, const PointSet& bm) const {
  Eigen::MatrixXd K = kernel_matrix(spec_, am, bm);
  if (size() > 0) K.noalias() -= whiten(am).transpose() * whiten(bm);
  return K;
}

Eigen::MatrixXd GpModel::covariance(const PointSet& a, const PointSet& b) const {
  check_query(a);
  check_query(b);
  const PointSet am = to_model_units(a);
  Eigen::MatrixXd C;
  if (&a == &b) {
    C = kernel_matrix(spec_, am, am);
    if (size() > 0) {
      const Eigen::MatrixXd V = whiten(am);
      C.noalias() -= V.transpose() * V;
    }
  } else {
    C = covariance_model(am, to_model_units(b));
  }
  return scales_for(a).asDiagonal() * C * scales_for(b).asDiagonal();
}

Eigen::VectorXd GpModel::variance(const PointSet& q) const {
  check_query(q);
  const PointSet qm = to_model_units(q);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(q.size(), spec_.variance);
  if (spec_.multi_output()) v *= spec_.level_variance;
  if (size() > 0) v -= whiten(qm).colwise().squaredNorm().transpose();
  return (v.array().max(0.0) * scales_for(q).array().square()).matrix();
}

Prediction GpModel::predict(const PointSet& q) const {
  return {mean(q), covariance(q, q)};
}

std::vector<Eigen::MatrixXd> GpModel::block_covariances(const PointSet& q, Eigen::Index block) const {
  check_query(q);
  if (block <= 0 || q.size() % block != 0) throw ShapeError("block_covariances: size is not a multiple of block");
  const PointSet qm = to_model_units(q);
  const Eigen::VectorXd s = scales_for(q);
  const Eigen::MatrixXd V = whiten(qm);
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(q.size() / block));
  for (Eigen::Index start = 0; start < q.size(); start += block) {
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(block));
    for (Eigen::Index k = 0; k < block; ++k) rows[static_cast<std::size_t>(k)] = start + k;
    const PointSet g = qm.subset(rows);
    Eigen::MatrixXd C = kernel_matrix(spec_, g, g);
    if (size() > 0) C.noalias() -= V.middleCols(start, block).transpose() * V.middleCols(start, block);
    const Eigen::VectorXd sg = s.segment(start, block);
    out.push_back(sg.asDiagonal() * C * sg.asDiagonal());
  }
  return out;
}

Eigen::MatrixXd GpModel::sample_trajectories(const PointSet& q, int n_traj, std::uint64_t seed) const {
  if (n_traj < 1) throw DomainError("sample_trajectories: n_traj must be >= 1");
  const Prediction pred = predict(q);
  const CovarianceFactor f = factor_covariance(pred.cov);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(q.size(), n_traj);
  for (Eigen::Index j = 0; j < z.cols(); ++j)
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = normal(rng);
  Eigen::MatrixXd draws = f.lower * z;
  draws.colwise() += pred.mean;
  return draws.transpose();
}

double GpModel::jitter_variance(int level) const {
  const double s = scaling_.scale[static_cast<std::size_t>(level)];
  return jitter_ * spec_.variance * s * s;
}

Eigen::MatrixXd GpModel::one_step_update_cov(const PointSet& pending, const PointSet& queries) const {
  if (pending.empty()) throw ShapeError("one_step_update_cov: pending set is empty");
  check_query(pending);
  check_query(queries);
  const PointSet pm = to_model_units(pending);
  const PointSet qm = to_model_units(queries);
  Eigen::MatrixXd Kpp = covariance_model(pm, pm);
  const Eigen::MatrixXd Kqp = covariance_model(qm, pm);
  Eigen::MatrixXd Kqq = covariance_model(qm, qm);
  JitterPolicy policy;
  policy.initial = jitter_ > 0.0 ? jitter_ : policy.initial;
  const auto jc = jittered_cholesky(Kpp, spec_.variance, policy);
  Eigen::MatrixXd W = Kqp.transpose();
  jc.llt.matrixL().solveInPlace(W);
  Kqq.noalias() -= W.transpose() * W;
  const Eigen::VectorXd s = scales_for(queries);
  return s.asDiagonal() * Kqq * s.asDiagonal();
}

double GpModel::log_likelihood() const {
  const auto n = static_cast<double>(size());
  if (size() == 0) return 0.0;
  const Eigen::VectorXd r = y_std_.array() - spec_.prior_mean;
  return -0.5 * r.dot(alpha_) - lower_.diagonal().array().log().sum() - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

namespace {

void write_vec(std::ostream& os, const char* key, const Eigen::VectorXd& v) {
  os << key << ' ' << v.size();
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ' ' << v[i];
  os << '\n';
}

Eigen::VectorXd read_vec(std::istream& is, const char* key) {
  std::string k;
  Eigen::Index n = 0;
  if (!(is >> k >> n) || k != key) throw DataError(std::string("GpModel::load: expected ") + key);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) is >> v[i];
  return v;
}

template <typename T>
T read_scalar(std::istream& is, const char* key) {
  std::string k;
  T v{};
  if (!(is >> k >> v) || k != key) throw DataError(std::string("GpModel::load: expected ") + key);
  return v;
}

}  // namespace

void GpModel::dump(std::ostream& os) const {
  os << std::setprecision(17);
  os << "ccbo-gp 1\n";
  os << "variance " << spec_.variance << '\n';
  os << "prior_mean " << spec_.prior_mean << '\n';
  write_vec(os, "lengthscales", spec_.lengthscales);
  os << "levels " << spec_.n_levels << '\n';
  os << "level_variance " << spec_.level_variance << '\n';
  write_vec(os, "angles", Eigen::Map<const Eigen::VectorXd>(spec_.angles.data(), static_cast<Eigen::Index>(spec_.angles.size())));
  write_vec(os, "box_lower", box_.lower);
  write_vec(os, "box_upper", box_.upper);
  write_vec(os, "shift", Eigen::Map<const Eigen::VectorXd>(scaling_.shift.data(), static_cast<Eigen::Index>(scaling_.shift.size())));
  write_vec(os, "scale", Eigen::Map<const Eigen::VectorXd>(scaling_.scale.data(), static_cast<Eigen::Index>(scaling_.scale.size())));
  os << "data " << size() << ' ' << spec_.input_dim() << '\n';
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (inputs_.has_levels()) os << inputs_.level(i) << ' ';
    for (Eigen::Index k = 0; k < inputs_.dim(); ++k) os << inputs_.coords()(i, k) << ' ';
    os << outputs_[i] << '\n';
  }
}

GpModel GpModel::load(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "ccbo-gp" || version != 1) throw DataError("GpModel::load: bad header");
  KernelSpec spec;
  spec.variance = read_scalar<double>(is, "variance");
  spec.prior_mean = read_scalar<double>(is, "prior_mean");
  spec.lengthscales = read_vec(is, "lengthscales");
  spec.n_levels = read_scalar<int>(is, "levels");
  spec.level_variance = read_scalar<double>(is, "level_variance");
  const Eigen::VectorXd angles = read_vec(is, "angles");
  spec.angles.assign(angles.data(), angles.data() + angles.size());
  InputBox box{read_vec(is, "box_lower"), read_vec(is, "box_upper")};
  const Eigen::VectorXd shift = read_vec(is, "shift");
  const Eigen::VectorXd scale = read_vec(is, "scale");
  OutputScaling scaling;
  scaling.shift.assign(shift.data(), shift.data() + shift.size());
  scaling.scale.assign(scale.data(), scale.data() + scale.size());
  std::string key;
  Eigen::Index n = 0, dim = 0;
  if (!(is >> key >> n >> dim) || key != "data") throw DataError("GpModel::load: expected data");
  Eigen::MatrixXd coords(n, dim);
  std::vector<int> levels;
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (spec.n_levels > 0) {
      int l = 0;
      is >> l;
      levels.push_back(l);
    }
    for (Eigen::Index k = 0; k < dim; ++k) is >> coords(i, k);
    is >> y[i];
  }
  if (!is) throw DataError("GpModel::load: truncated data");
  return condition(spec, box, PointSet(std::move(coords), std::move(levels)), std::move(y), scaling);
}

}  // namespace ccbo::gp
