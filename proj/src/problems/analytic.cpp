#include "ccbo/problems/problem.hpp"

namespace ccbo::problems {

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

double cube(double v) { return v * v * v; }
double sq(double v) { return v * v; }

}  // namespace

ProblemDefinition problem_2d() {
  ProblemDefinition p;
  p.name = "analytic-2d";
  p.objective = [](const Eigen::VectorXd& x, const Eigen::VectorXd& u) { return cube(x[0] - 10.0) + cube(u[0] - 20.0); };
  p.constraints = {
      [](const Eigen::VectorXd& x, const Eigen::VectorXd& u) { return -sq(x[0] - 5.0) - sq(u[0] - 5.0) + 500.0; },
      [](const Eigen::VectorXd& x, const Eigen::VectorXd& u) { return sq(x[0] - 6.0) + sq(u[0] - 5.0) - 9000.0; },
  };
  p.x_lower = vec({13.0});
  p.x_upper = vec({100.0});
  p.u_lower = vec({0.0});
  p.u_upper = vec({100.0});
  p.u_sampler = robust::uniform_sampler(p.u_lower, p.u_upper);
  p.alpha = 0.05;
  return p;
}

namespace {

double g1_4d(const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  return -sq(x[0]) + 5.0 * x[1] - u[0] + sq(u[1]) - 1.0;
}

}  // namespace

ProblemDefinition problem_4d() {
  ProblemDefinition p;
  p.name = "analytic-4d";
  p.objective = [](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    return 5.0 * (sq(x[0]) + sq(x[1])) - (sq(u[0]) + sq(u[1])) + x[0] * (u[1] - u[0] + 5.0) + x[1] * (u[0] - u[1] + 3.0);
  };
  p.constraints = {
      g1_4d,
      [](const Eigen::VectorXd& x, const Eigen::VectorXd& u) { return g1_4d(x, u) * (x[0] + 5.0) / 5.0 - u[0] - 1.0; },
  };
  p.x_lower = vec({-5.0, -5.0});
  p.x_upper = vec({5.0, 5.0});
  p.u_lower = vec({-5.0, -5.0});
  p.u_upper = vec({5.0, 5.0});
  p.u_sampler = robust::uniform_sampler(p.u_lower, p.u_upper);
  p.alpha = 0.05;
  return p;
}

}  // namespace ccbo::problems
