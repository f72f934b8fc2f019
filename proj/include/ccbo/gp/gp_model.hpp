#pragma once

#include "ccbo/gp/kernel.hpp"
#include "ccbo/gp/linalg.hpp"
#include "ccbo/gp/point_set.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace ccbo::gp {

/// Affine map of the continuous coordinates onto the unit box.
struct InputBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static InputBox unit(Eigen::Index dim);
  Eigen::Index dim() const { return lower.size(); }
  Eigen::MatrixXd normalize(const Eigen::MatrixXd& coords) const;
  bool contains(const Eigen::VectorXd& z) const;
};

struct GpOptions {
  /// Standardize each output channel to zero mean and unit variance.
  bool standardize_outputs = true;
  JitterPolicy jitter;
};

/// Per-channel affine map raw = shift + scale * standardized.
struct OutputScaling {
  std::vector<double> shift;
  std::vector<double> scale;

  static OutputScaling identity(int channels);
  static OutputScaling fit(const PointSet& inputs, const Eigen::VectorXd& outputs, int channels);
  Eigen::VectorXd standardize(const PointSet& inputs, const Eigen::VectorXd& outputs) const;
};

struct Prediction {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Noise-free Gaussian process conditioned on a data set. Immutable: every
/// query method is const and thread-safe.
///
/// Inputs and outputs are given and returned in raw problem units. Internally
/// coordinates are mapped through `box()` to [0,1] and outputs are
/// standardized per output channel; the KernelSpec lives in those model units.
class GpModel {
 public:
  /// Conditions the prior on (inputs, outputs). Throws DataError on exact
  /// duplicate rows, IllConditionedError when the jitter schedule fails.
  static GpModel condition(const KernelSpec& spec, const InputBox& box, PointSet inputs, Eigen::VectorXd outputs,
                           const GpOptions& options = {});

  /// Same, with a caller-supplied output scaling (used by the trainer so that
  /// the trained spec and the final model share units).
  static GpModel condition(const KernelSpec& spec, const InputBox& box, PointSet inputs, Eigen::VectorXd outputs,
                           const OutputScaling& scaling, const JitterPolicy& jitter = {});

  const KernelSpec& kernel() const { return spec_; }
  const InputBox& box() const { return box_; }
  const PointSet& inputs() const { return inputs_; }
  const Eigen::VectorXd& outputs() const { return outputs_; }
  const OutputScaling& scaling() const { return scaling_; }
  Eigen::Index size() const { return inputs_.size(); }
  int n_levels() const { return spec_.n_levels; }
  int n_channels() const { return std::max(spec_.n_levels, 1); }
  double jitter() const { return jitter_; }

  Eigen::VectorXd mean(const PointSet& q) const;
  Eigen::VectorXd variance(const PointSet& q) const;
  Eigen::MatrixXd covariance(const PointSet& a, const PointSet& b) const;
  Prediction predict(const PointSet& q) const;

  /// Diagonal blocks of the posterior covariance for consecutive groups of
  /// `block` rows of q (e.g. the l outputs at one (x, u)).
  std::vector<Eigen::MatrixXd> block_covariances(const PointSet& q, Eigen::Index block) const;

  /// n_traj joint posterior draws over q, one trajectory per row.
  Eigen::MatrixXd sample_trajectories(const PointSet& q, int n_traj, std::uint64_t seed) const;

  /// Posterior covariance over `queries` after conditioning additionally on
  /// `pending` under the Kriging Believer assumption (mean unchanged).
  Eigen::MatrixXd one_step_update_cov(const PointSet& pending, const PointSet& queries) const;

  /// Gaussian log marginal likelihood of the standardized data.
  double log_likelihood() const;

  /// Raw-unit variance of the diagonal jitter for a row of the given level.
  double jitter_variance(int level) const;

  // Model-unit access for fast paths.
  PointSet to_model_units(const PointSet& q) const;
  /// L^{-1} K(D, q) for q already in model units.
  Eigen::MatrixXd whiten(const PointSet& q_model) const;
  const PointSet& model_inputs() const { return model_inputs_; }
  const Eigen::VectorXd& weights() const { return alpha_; }
  const Eigen::MatrixXd& cholesky_lower() const { return lower_; }

  /// Versioned text dump of hyperparameters, scaling and data.
  void dump(std::ostream& os) const;
  static GpModel load(std::istream& is);

 private:
  GpModel() = default;
  void check_query(const PointSet& q) const;
  Eigen::MatrixXd covariance_model(const PointSet& a_model, const PointSet& b_model) const;
  Eigen::VectorXd scales_for(const PointSet& q) const;

  KernelSpec spec_;
  InputBox box_;
  OutputScaling scaling_;
  PointSet inputs_;
  Eigen::VectorXd outputs_;
  PointSet model_inputs_;
  Eigen::VectorXd y_std_;
  Eigen::MatrixXd lower_;
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
};

}  // namespace ccbo::gp
