#include "ccbo/gp/train.hpp"

#include "ccbo/errors.hpp"
#include "ccbo/seed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace ccbo::gp {

namespace {

constexpr double kPi = std::numbers::pi;

struct Codec {
  Eigen::Index dim;
  std::size_t n_angles;
  double log_lo, log_hi;

  Eigen::Index size() const { return dim + static_cast<Eigen::Index>(n_angles); }

  KernelSpec decode(const KernelSpec& tmpl, const Eigen::VectorXd& t) const {
    KernelSpec s = tmpl;
    s.lengthscales.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) s.lengthscales[i] = std::pow(10.0, log_lo + (log_hi - log_lo) * t[i]);
    s.angles.resize(n_angles);
    for (std::size_t k = 0; k < n_angles; ++k) s.angles[k] = -kPi + 2.0 * kPi * t[dim + static_cast<Eigen::Index>(k)];
    s.level_variance = 1.0;
    s.variance = 1.0;
    s.prior_mean = 0.0;
    return s;
  }

  Eigen::VectorXd encode(const KernelSpec& s) const {
    Eigen::VectorXd t(size());
    for (Eigen::Index i = 0; i < dim; ++i) t[i] = (std::log10(s.lengthscales[i]) - log_lo) / (log_hi - log_lo);
    for (std::size_t k = 0; k < n_angles; ++k)
      t[dim + static_cast<Eigen::Index>(k)] = (std::clamp(s.angles[k], -kPi, kPi) + kPi) / (2.0 * kPi);
    return t.cwiseMax(0.0).cwiseMin(1.0);
  }
};

}  // namespace

ProfiledLikelihood profiled_log_likelihood(const KernelSpec& spec, const PointSet& model_inputs,
                                           const Eigen::VectorXd& y_std, const TrainOptions& options) {
  const Eigen::Index n = model_inputs.size();
  KernelSpec unit = spec;
  unit.variance = 1.0;
  const Eigen::MatrixXd R = kernel_matrix(unit, model_inputs, model_inputs);
  const auto jc = jittered_cholesky(R, unit.level_variance, options.jitter);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd Ri1 = jc.llt.solve(ones);
  const Eigen::VectorXd Riy = jc.llt.solve(y_std);
  const double mu = ones.dot(Riy) / ones.dot(Ri1);
  const Eigen::VectorXd r = y_std.array() - mu;
  const double quad = r.dot(Riy - mu * Ri1);
  const double var = std::clamp(quad / static_cast<double>(n), options.variance_lower, options.variance_upper);
  const double logdet = 2.0 * Eigen::MatrixXd(jc.llt.matrixL()).diagonal().array().log().sum();
  const double nn = static_cast<double>(n);
  const double ll = -0.5 * quad / var - 0.5 * nn * std::log(var) - 0.5 * logdet - 0.5 * nn * std::log(2.0 * kPi);
  return {ll, mu, var};
}

TrainResult train(const KernelSpec& tmpl, const InputBox& box, const PointSet& inputs, const Eigen::VectorXd& outputs,
                  const TrainOptions& options, std::uint64_t seed, const std::optional<KernelSpec>& warm_start) {
  if (inputs.size() < 2) throw DataError("train: need at least two observations");
  if (inputs.size() != outputs.size()) throw ShapeError("train: inputs and outputs differ in length");
  if (options.restarts < 1) throw DomainError("train: restarts must be at least 1");
  if (!duplicate_rows(inputs).empty()) throw DataError("train: exact duplicate rows in training data");
  tmpl.validate();

  const int channels = std::max(tmpl.n_levels, 1);
  const OutputScaling scaling = OutputScaling::fit(inputs, outputs, channels);
  const Eigen::VectorXd y = scaling.standardize(inputs, outputs);
  const PointSet model_inputs(box.normalize(inputs.coords()), inputs.levels());
  const Codec codec{tmpl.input_dim(), angle_count(tmpl.n_levels), std::log10(options.lengthscale_lower),
                    std::log10(options.lengthscale_upper)};

  TrainResult best;
  best.log_likelihood = -std::numeric_limits<double>::infinity();
  int evaluations = 0;
  auto objective = [&](const Eigen::VectorXd& t) {
    ++evaluations;
    try {
      return -profiled_log_likelihood(codec.decode(tmpl, t), model_inputs, y, options).value;
    } catch (const IllConditionedError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int failed = 0;
  for (int r = 0; r < options.restarts; ++r) {
    Eigen::VectorXd t0(codec.size());
    if (r == 0 && warm_start) {
      t0 = codec.encode(*warm_start);
    } else {
      for (Eigen::Index i = 0; i < t0.size(); ++i) t0[i] = unif(rng);
    }
    const CobylaResult res = cobyla_minimize(objective, t0, options.local);
    if (!(res.value < 1e29)) {
      ++failed;
      continue;
    }
    if (-res.value > best.log_likelihood) {
      best.log_likelihood = -res.value;
      best.spec = codec.decode(tmpl, res.x);
    }
  }
  if (failed == options.restarts) throw TrainingError("train: every start failed to factorize");

  const auto pl = profiled_log_likelihood(best.spec, model_inputs, y, options);
  best.spec.variance = pl.variance;
  best.spec.prior_mean = pl.mean;
  best.log_likelihood = pl.value;
  best.evaluations = evaluations;
  best.failed_starts = failed;
  return best;
}

GpModel fit(const KernelSpec& tmpl, const InputBox& box, const PointSet& inputs, const Eigen::VectorXd& outputs,
            const TrainOptions& options, std::uint64_t seed, const std::optional<KernelSpec>& warm_start) {
  const TrainResult tr = train(tmpl, box, inputs, outputs, options, seed, warm_start);
  const OutputScaling scaling = OutputScaling::fit(inputs, outputs, std::max(tmpl.n_levels, 1));
  return GpModel::condition(tr.spec, box, inputs, outputs, scaling, options.jitter);
}

}  // namespace ccbo::gp
