#include "ccbo/errors.hpp"
#include "ccbo/opt/algorithm.hpp"
#include "ccbo/opt/doe.hpp"
#include "ccbo/opt/run_record.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

using namespace ccbo;
using namespace ccbo::opt;

namespace {

AlgorithmConfig small_config(Variant v, int budget) {
  AlgorithmConfig c;
  c.variant = v;
  c.budget = budget;
  c.n_u = 30;
  c.n_traj = 50;
  c.n_improvement = 100;
  c.cand_factor = 60;
  c.restarts = 3;
  c.retrain_restarts = 1;
  c.reporting_mc = 2000;
  c.seed = 1234;
  return c;
}

std::string csv(const RunRecord& r) {
  std::ostringstream os;
  write_run_csv(os, r);
  return os.str();
}

problems::ProblemDefinition single_constraint() {
  auto p = problems::problem_2d();
  p.constraints.resize(1);
  p.name = "analytic-2d-g1";
  return p;
}

}  // namespace

TEST_CASE("latin hypercube stratifies every column") {
  Rng rng(4);
  const Eigen::MatrixXd x = latin_hypercube(17, 3, rng);
  for (Eigen::Index k = 0; k < 3; ++k) {
    std::set<int> cells;
    for (Eigen::Index i = 0; i < 17; ++i) {
      CHECK(x(i, k) >= 0.0);
      CHECK(x(i, k) < 1.0);
      cells.insert(static_cast<int>(std::floor(x(i, k) * 17)));
    }
    CHECK(cells.size() == 17);
  }
}

TEST_CASE("maximin design spreads points at least as well as a random one") {
  const Eigen::MatrixXd best = maximin_lhs(12, 2, 8);
  double random_mean = 0.0;
  Rng rng(8);
  for (int r = 0; r < 20; ++r) random_mean += min_distance(latin_hypercube(12, 2, rng)) / 20.0;
  CHECK(min_distance(best) >= random_mean);
  CHECK(maximin_lhs(12, 2, 8) == best);
  CHECK(min_distance(Eigen::MatrixXd::Zero(1, 2)) == std::numeric_limits<double>::infinity());

  Eigen::MatrixXd pts(3, 2);
  pts << 0, 0, 3, 4, 1, 1;
  CHECK(min_distance(pts) == doctest::Approx(std::sqrt(2.0)));
  const Eigen::MatrixXd s = scale_to_box(pts / 10.0, Eigen::Vector2d(-1, 0), Eigen::Vector2d(1, 10));
  CHECK(s(1, 0) == doctest::Approx(-0.4));
  CHECK(s(1, 1) == doctest::Approx(4.0));
}

TEST_CASE("initial design lies in the boxes and depends only on the seed") {
  const auto p = problems::problem_4d();
  const auto a = init_doe(p, 9, 5), b = init_doe(p, 9, 5), c = init_doe(p, 9, 6);
  CHECK(a.x == b.x);
  CHECK(a.u == b.u);
  CHECK(a.x != c.x);
  CHECK(a.x.rows() == 9);
  CHECK(a.u.cols() == 2);
  CHECK(a.x.minCoeff() >= -5.0);
  CHECK(a.u.maxCoeff() <= 5.0);
}

TEST_CASE("variant names") {
  for (const char* n : {"REF", "SMCS", "MMCU", "MMCS"}) CHECK(variant_name(parse_variant(n)) == n);
  CHECK_THROWS_AS(parse_variant("ref"), ConfigError);
  CHECK(coupled_constraints(Variant::kMmcu));
  CHECK(!coupled_constraints(Variant::kSmcs));
  CHECK(selects_constraint(Variant::kSmcs));
  CHECK(!selects_constraint(Variant::kMmcu));
}

TEST_CASE("config validation") {
  AlgorithmConfig c;
  CHECK_NOTHROW(c.validate());
  c.t_init = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.budget = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.alpha = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("budget accounting per variant") {
  const auto p = problems::problem_2d();
  for (Variant v : {Variant::kRef, Variant::kSmcs, Variant::kMmcu, Variant::kMmcs}) {
    const RunRecord r = run(p, small_config(v, 5));
    INFO(variant_name(v) << " " << r.error);
    REQUIRE(r.completed());
    const int cost = selects_constraint(v) ? 1 : 2;
    CHECK(r.rows.size() == static_cast<std::size_t>(5 / cost + 1));
    CHECK(r.rows.front().constraint_evals == 0);
    CHECK(r.rows.front().objective_evals == 0);
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
      const auto& row = r.rows[k];
      CHECK(row.iteration == static_cast<int>(k));
      CHECK(row.constraint_evals == cost * static_cast<int>(k));
      CHECK(row.objective_evals == static_cast<int>(k));
      CHECK(row.constraint_calls[0] + row.constraint_calls[1] == row.constraint_evals);
      if (k == 0) continue;
      CHECK(row.p.has_value() == selects_constraint(v));
      if (!selects_constraint(v)) {
        CHECK(row.u_f == row.u_g);
        CHECK(row.constraint_calls[0] == row.constraint_calls[1]);
      }
    }
    CHECK(r.final_row().constraint_evals <= 5);
  }
}

TEST_CASE("zero budget records the initial state only") {
  const RunRecord r = run(problems::problem_2d(), small_config(Variant::kMmcs, 0));
  REQUIRE(r.completed());
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].constraint_evals == 0);
  CHECK(r.rows[0].incumbent_x.size() == 1);
  // A budget below the cost of one step is the same as none.
  const RunRecord one = run(problems::problem_2d(), small_config(Variant::kRef, 1));
  CHECK(one.rows.size() == 1);
}

TEST_CASE("runs are deterministic and CSVs round-trip") {
  const auto p = problems::problem_2d();
  const RunRecord a = run(p, small_config(Variant::kSmcs, 4));
  const RunRecord b = run(p, small_config(Variant::kSmcs, 4));
  CHECK(csv(a) == csv(b));
  std::istringstream is(csv(a));
  const RunRecord back = read_run_csv(is);
  CHECK(csv(back) == csv(a));
  CHECK(back.rows.size() == a.rows.size());
  CHECK(back.final_row().incumbent_value == a.final_row().incumbent_value);
  CHECK(csv(a).rfind("# ccbo run-record schema 1 ", 0) == 0);
  const std::string js = run_summary_json(a);
  CHECK(js.find('\n') == std::string::npos);
  CHECK(js.find("\"variant\":\"SMCS\"") != std::string::npos);
}

TEST_CASE("with one constraint SMCS is the split-u REF path and always picks it") {
  const auto p = single_constraint();
  const RunRecord smcs = run(p, small_config(Variant::kSmcs, 5));
  AlgorithmConfig rc = small_config(Variant::kRef, 5);
  rc.split_u = true;
  const RunRecord ref = run(p, rc);
  REQUIRE(smcs.completed());
  REQUIRE(ref.completed());
  REQUIRE(smcs.rows.size() == 6);
  REQUIRE(ref.rows.size() == 6);
  for (std::size_t k = 1; k < smcs.rows.size(); ++k) {
    CHECK(smcs.rows[k].p == std::optional<int>(0));
    CHECK(smcs.rows[k].x_targ == ref.rows[k].x_targ);
    CHECK(smcs.rows[k].u_f == ref.rows[k].u_f);
    CHECK(smcs.rows[k].u_g == ref.rows[k].u_g);
    CHECK(smcs.rows[k].incumbent_value == ref.rows[k].incumbent_value);
  }
}

TEST_CASE("failing problem functions stop the run with a partial record") {
  auto p = problems::problem_2d();
  p.objective = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) {
    return x[0] > 50.0 ? std::numeric_limits<double>::quiet_NaN() : x[0];
  };
  const RunRecord r = run(p, small_config(Variant::kRef, 40));
  CHECK(!r.completed());
  CHECK(r.error.find("non-finite") != std::string::npos);
}

TEST_CASE("candidate sets depend only on the seed") {
  const auto p = problems::problem_4d();
  const auto a = make_candidates(p, 10, 3), b = make_candidates(p, 10, 3);
  CHECK(a.x == b.x);
  CHECK(a.u == b.u);
  CHECK(a.x.rows() == 20);
  CHECK(a.u.rows() == 20);
}
