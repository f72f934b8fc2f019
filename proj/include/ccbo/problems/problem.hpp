#pragma once

#include "ccbo/gp/gp_model.hpp"
#include "ccbo/robust/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace ccbo::problems {

using Function = std::function<double(const Eigen::VectorXd& x, const Eigen::VectorXd& u)>;

/// A chance-constrained problem
///
///   min_x E_U[f(x, U)]  s.t.  P(g_p(x, U) <= 0 for all p) >= 1 - alpha.
///
/// User problems implement this contract: deterministic, total functions on
/// the boxes, and a sampler for the uncertain parameters whose support lies in
/// [u_lower, u_upper].
struct ProblemDefinition {
  std::string name;
  Function objective;
  std::vector<Function> constraints;
  Eigen::VectorXd x_lower, x_upper;
  Eigen::VectorXd u_lower, u_upper;
  robust::USampler u_sampler;
  double alpha = 0.05;

  Eigen::Index d() const { return x_lower.size(); }
  Eigen::Index m() const { return u_lower.size(); }
  int l() const { return static_cast<int>(constraints.size()); }

  /// Throws ConfigError on inconsistent or empty definitions.
  void validate() const;
  /// Box of the joint [x | u] space.
  gp::InputBox joint_box() const;
  gp::InputBox x_box() const;
};

ProblemDefinition problem_2d();
ProblemDefinition problem_4d();

/// Built-in problems by name: "analytic-2d", "analytic-4d". Throws ConfigError.
ProblemDefinition make_problem(const std::string& name);
std::vector<std::string> problem_names();

}  // namespace ccbo::problems
