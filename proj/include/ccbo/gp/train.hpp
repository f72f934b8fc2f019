#pragma once

#include "ccbo/gp/cobyla.hpp"
#include "ccbo/gp/gp_model.hpp"

#include <cstdint>
#include <optional>

namespace ccbo::gp {

struct TrainOptions {
  int restarts = 20;
  double lengthscale_lower = 1e-2;
  double lengthscale_upper = 1e1;
  double variance_lower = 1e-6;
  double variance_upper = 1e2;
  CobylaOptions local{0.25, 1e-3, 300};
  JitterPolicy jitter;
};

struct TrainResult {
  KernelSpec spec;
  double log_likelihood = 0.0;
  int evaluations = 0;
  int failed_starts = 0;
};

/// Maximum-likelihood hyperparameters for the template's kernel structure.
///
/// The constant prior mean and the process variance are profiled out in
/// closed form (generalized least squares), so the local search runs over
/// log-lengthscales and, for multi-output kernels, the hypersphere angles
/// only. The level variance is fixed to 1 since only its product with the
/// process variance is identifiable. Starts: the warm start when given,
/// then uniform random points, `options.restarts` in total.
TrainResult train(const KernelSpec& tmpl, const InputBox& box, const PointSet& inputs, const Eigen::VectorXd& outputs,
                  const TrainOptions& options, std::uint64_t seed, const std::optional<KernelSpec>& warm_start = {});

/// Profiled log-likelihood of standardized outputs under the correlation
/// structure of `spec`; also returns the GLS mean and clamped variance.
struct ProfiledLikelihood {
  double value = 0.0;
  double mean = 0.0;
  double variance = 1.0;
};
ProfiledLikelihood profiled_log_likelihood(const KernelSpec& spec, const PointSet& model_inputs,
                                           const Eigen::VectorXd& y_std, const TrainOptions& options);

/// Train, then condition on the same data with the same output scaling.
GpModel fit(const KernelSpec& tmpl, const InputBox& box, const PointSet& inputs, const Eigen::VectorXd& outputs,
            const TrainOptions& options, std::uint64_t seed, const std::optional<KernelSpec>& warm_start = {});

}  // namespace ccbo::gp
