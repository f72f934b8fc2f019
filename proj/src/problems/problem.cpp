#include "ccbo/problems/problem.hpp"

#include "ccbo/errors.hpp"

namespace ccbo::problems {

void ProblemDefinition::validate() const {
  if (!objective) throw ConfigError("problem " + name + ": missing objective");
  if (constraints.empty()) throw ConfigError("problem " + name + ": needs at least one constraint");
  for (const auto& g : constraints)
    if (!g) throw ConfigError("problem " + name + ": empty constraint function");
  if (d() < 1 || m() < 1) throw ConfigError("problem " + name + ": needs design and uncertain variables");
  if (x_upper.size() != d() || u_upper.size() != m()) throw ConfigError("problem " + name + ": bound sizes differ");
  if (!((x_upper - x_lower).array() > 0.0).all() || !((u_upper - u_lower).array() > 0.0).all())
    throw ConfigError("problem " + name + ": empty box");
  if (!x_lower.allFinite() || !x_upper.allFinite() || !u_lower.allFinite() || !u_upper.allFinite())
    throw ConfigError("problem " + name + ": bounds must be finite");
  if (!u_sampler) throw ConfigError("problem " + name + ": missing u sampler");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("problem " + name + ": alpha must lie in (0, 1)");
}

gp::InputBox ProblemDefinition::joint_box() const {
  gp::InputBox b;
  b.lower.resize(d() + m());
  b.upper.resize(d() + m());
  b.lower << x_lower, u_lower;
  b.upper << x_upper, u_upper;
  return b;
}

gp::InputBox ProblemDefinition::x_box() const { return {x_lower, x_upper}; }

ProblemDefinition make_problem(const std::string& name) {
  if (name == "analytic-2d") return problem_2d();
  if (name == "analytic-4d") return problem_4d();
  throw ConfigError("unknown problem '" + name + "'");
}

std::vector<std::string> problem_names() { return {"analytic-2d", "analytic-4d"}; }

}  // namespace ccbo::problems
