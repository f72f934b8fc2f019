#include "ccbo/errors.hpp"
#include "ccbo/gp/constraint_model.hpp"
#include "ccbo/robust/feasibility.hpp"
#include "ccbo/robust/mvn_cdf.hpp"
#include "ccbo/robust/normal.hpp"
#include "ccbo/robust/quadrature.hpp"
#include "ccbo/robust/z_process.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ccbo;
using namespace ccbo::robust;

namespace {

constexpr double kPi = std::numbers::pi;

/// Composite Simpson rule on a fine grid, used as an independent oracle.
template <class F>
double integrate(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// P(all Y_i <= h_i) for unit-variance equicorrelated normals, rho >= 0, via
/// the one-factor representation Y_i = sqrt(rho) T + sqrt(1 - rho) E_i.
double equicorrelated_cdf(const Eigen::VectorXd& h, double rho) {
  return integrate(
      [&](double t) {
        double p = norm_pdf(t);
        for (Eigen::Index i = 0; i < h.size(); ++i) p *= norm_cdf((h[i] - std::sqrt(rho) * t) / std::sqrt(1.0 - rho));
        return p;
      },
      -9.0, 9.0);
}

Eigen::MatrixXd equicorrelation(Eigen::Index n, double rho) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, rho);
  c.diagonal().setOnes();
  return c;
}

gp::GpModel scalar_model(const gp::PointSet& p, const Eigen::VectorXd& y, double ls = 0.3) {
  return gp::GpModel::condition(gp::KernelSpec::scalar(p.dim(), ls), gp::InputBox::unit(p.dim()), p, y);
}

}  // namespace

TEST_CASE("normal helpers") {
  CHECK(norm_cdf(0.0) == 0.5);
  CHECK(norm_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)));
  CHECK(norm_cdf(-40.0) == 0.0);
  CHECK(norm_cdf(-10.0) > 0.0);
  for (double z : {-6.0, -1.3, 0.0, 0.4, 3.7}) CHECK(norm_quantile(norm_cdf(z)) == doctest::Approx(z).epsilon(1e-10));
  CHECK(std::isfinite(norm_quantile(0.0)));
  CHECK(std::isfinite(norm_quantile(1.0)));
}

TEST_CASE("bivariate normal at the origin matches the arcsine law") {
  for (double r = -0.99; r <= 0.99; r += 0.09)
    CHECK(bvn_cdf(0.0, 0.0, r) == doctest::Approx(0.25 + std::asin(r) / (2.0 * kPi)).epsilon(1e-12));
}

TEST_CASE("bivariate normal against conditional integration") {
  for (double r : {-0.95, -0.5, 0.0, 0.3, 0.8, 0.97})
    for (double h : {-2.0, -0.3, 1.1})
      for (double k : {-1.4, 0.2, 2.5}) {
        const double oracle = integrate(
            [&](double x) { return norm_pdf(x) * norm_cdf((k - r * x) / std::sqrt(1.0 - r * r)); }, -12.0, h, 40000);
        CHECK(std::abs(bvn_cdf(h, k, r) - oracle) < 1e-9);
      }
  CHECK(bvn_cdf(0.3, 0.5, 1.0) == doctest::Approx(norm_cdf(0.3)));
  CHECK(bvn_cdf(0.3, 0.5, -1.0) == doctest::Approx(std::max(0.0, norm_cdf(0.3) - norm_cdf(-0.5))));
}

TEST_CASE("mvn_cdf closed forms") {
  const Eigen::Vector3d mean(0.5, -1.0, 2.0), upper(1.0, 0.0, 1.5);
  const Eigen::Vector3d var(0.25, 4.0, 1.0);
  const MvnResult r = mvn_cdf(mean, var.asDiagonal().toDenseMatrix(), upper);
  double prod = 1.0;
  for (int i = 0; i < 3; ++i) prod *= norm_cdf((upper[i] - mean[i]) / std::sqrt(var[i]));
  CHECK(r.value == doctest::Approx(prod).epsilon(1e-14));
  CHECK(r.error == 0.0);

  Eigen::MatrixXd c = Eigen::Matrix2d::Identity();
  c(0, 0) = 0.0;
  CHECK(mvn_cdf(Eigen::Vector2d(-1.0, 0.0), c, Eigen::Vector2d::Zero()).value == doctest::Approx(0.5));
  CHECK(mvn_cdf(Eigen::Vector2d(1.0, 0.0), c, Eigen::Vector2d::Zero()).value == 0.0);

  const Eigen::VectorXd one = Eigen::VectorXd::Constant(1, 0.7);
  CHECK(mvn_cdf(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Constant(1, 1, 4.0), one).value ==
        doctest::Approx(norm_cdf(0.35)));
  CHECK_THROWS_AS(mvn_cdf(Eigen::Vector2d::Zero(), Eigen::Matrix3d::Identity(), Eigen::Vector2d::Zero()), ShapeError);
}

TEST_CASE("mvn_cdf in higher dimension against the one-factor oracle") {
  for (Eigen::Index n : {3, 5}) {
    for (double rho : {0.2, 0.7}) {
      Eigen::VectorXd h(n);
      for (Eigen::Index i = 0; i < n; ++i) h[i] = -0.5 + 0.4 * static_cast<double>(i);
      const MvnResult r = mvn_cdf(Eigen::VectorXd::Zero(n), equicorrelation(n, rho), h);
      const double oracle = equicorrelated_cdf(h, rho);
      CHECK(std::abs(r.value - oracle) < 2e-4);
      CHECK(r.error < 1e-3);
      CHECK(!r.clipped);
    }
  }
}

TEST_CASE("mvn_cdf is monotone in the upper limit and bounded") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd a(3, 3);
    for (auto& v : a.reshaped()) v = z(rng);
    const Eigen::MatrixXd cov = a * a.transpose() + 0.1 * Eigen::Matrix3d::Identity();
    Eigen::Vector3d up(z(rng), z(rng), z(rng));
    const double lo = mvn_cdf(Eigen::Vector3d::Zero(), cov, up).value;
    up[trial % 3] += 0.5;
    const double hi = mvn_cdf(Eigen::Vector3d::Zero(), cov, up).value;
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
    CHECK(hi >= lo - 1e-4);
  }
}

TEST_CASE("mvn_cdf projects indefinite covariances") {
  Eigen::Matrix3d c = equicorrelation(3, 0.9);
  c(0, 1) = c(1, 0) = -0.9;
  const MvnResult r = mvn_cdf(Eigen::Vector3d::Zero(), c, Eigen::Vector3d::Ones());
  CHECK(r.clipped);
  CHECK(r.value >= 0.0);
  CHECK(r.value <= 1.0);
}

TEST_CASE("gauss-legendre rules") {
  for (int n : {1, 2, 5, 12, 20}) {
    const auto [x, w] = gauss_legendre(n);
    CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs((x.array().pow(k) * w.array()).sum() - exact) < 1e-13);
    }
  }
}

TEST_CASE("quadrature rules are valid and reproducible") {
  const auto t = tensor_quadrature(Eigen::Vector2d(-1.0, 0.0), Eigen::Vector2d(3.0, 2.0), 4);
  CHECK(t.size() == 16);
  CHECK_NOTHROW(t.validate());
  // E[u1^2 u2] under the uniform density: (28/12) * 1.
  CHECK((t.nodes.col(0).array().square() * t.nodes.col(1).array() * t.weights.array()).sum() ==
        doctest::Approx(7.0 / 3.0));

  const USampler s = uniform_sampler(Eigen::Vector2d(0.0, -1.0), Eigen::Vector2d(1.0, 1.0));
  const auto a = monte_carlo_quadrature(s, 50, 9), b = monte_carlo_quadrature(s, 50, 9);
  CHECK(a.nodes == b.nodes);
  CHECK(a.weights.sum() == doctest::Approx(1.0));
  CHECK(a.nodes.col(1).minCoeff() >= -1.0);

  UncertaintyQuadrature bad = a;
  bad.weights[0] = -0.1;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.weights.resize(3);
  CHECK_THROWS_AS(bad.validate(), ShapeError);
}

TEST_CASE("Z process equals the explicit quadrature average") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd pts(25, 3);
  for (auto& v : pts.reshaped()) v = u(rng);
  Eigen::VectorXd y(25);
  for (Eigen::Index i = 0; i < 25; ++i) y[i] = 30.0 * std::sin(3 * pts(i, 0)) * pts(i, 2) + pts(i, 1);
  const gp::GpModel f = scalar_model(gp::PointSet(pts), y, 0.4);
  const USampler s = uniform_sampler(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1));
  const UncertaintyQuadrature quad = monte_carlo_quadrature(s, 40, 11);
  const ZProcess z(f, quad);

  Eigen::MatrixXd xs(3, 2);
  xs << 0.2, 0.3, 0.7, 0.9, 0.5, 0.5;
  const Eigen::VectorXd mz = z.mean(xs), vz = z.variance(xs);
  const Eigen::MatrixXd cz = z.covariance(xs, xs);
  gp::PointSet q1 = gp::PointSet::expand(xs.row(0).transpose(), quad.nodes, 0);
  gp::PointSet q2 = gp::PointSet::expand(xs.row(1).transpose(), quad.nodes, 0);
  for (int i = 0; i < 3; ++i) {
    const gp::PointSet q = gp::PointSet::expand(xs.row(i).transpose(), quad.nodes, 0);
    const gp::Prediction p = f.predict(q);
    CHECK(mz[i] == doctest::Approx(quad.weights.dot(p.mean)).epsilon(1e-10));
    const double var = quad.weights.dot(p.cov * quad.weights);
    CHECK(std::abs(vz[i] - var) < 1e-8 * (1.0 + var));
    CHECK(std::abs(cz(i, i) - var) < 1e-8 * (1.0 + var));
  }
  const double c12 = quad.weights.dot(f.covariance(q1, q2) * quad.weights);
  CHECK(std::abs(cz(0, 1) - c12) < 1e-8 * (1.0 + std::abs(c12)));

  const gp::PointSet probe(pts.topRows(4));
  const Eigen::VectorXd cross = z.cross_covariance(xs.row(2).transpose(), probe);
  const gp::PointSet q3 = gp::PointSet::expand(xs.row(2).transpose(), quad.nodes, 0);
  const Eigen::VectorXd oracle = f.covariance(probe, q3) * quad.weights;
  CHECK((cross - oracle).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(z.mean(Eigen::MatrixXd::Zero(1, 3)), ShapeError);
}

TEST_CASE("Z process variance vanishes on fully observed designs") {
  // Data at every (x0, u_j): Z(x0) is known exactly.
  const auto [gl, w] = gauss_legendre(5);
  UncertaintyQuadrature quad{(0.5 * (gl.array() + 1.0)).matrix(), 0.5 * w, QuadratureScheme::kTensor};
  gp::PointSet p = gp::PointSet::expand(Eigen::Vector2d(0.3, 0.6), quad.nodes, 0);
  p.append(gp::PointSet::expand(Eigen::Vector2d(0.8, 0.1), quad.nodes.topRows(2), 0));
  Eigen::VectorXd y(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) y[i] = p.coords()(i, 2) * 4.0 - p.coords()(i, 0);
  const gp::GpModel f = scalar_model(p, y);
  const ZProcess z(f, quad);
  const Eigen::MatrixXd x0 = Eigen::RowVector2d(0.3, 0.6);
  CHECK(z.variance(x0)[0] < 1e-6);
  CHECK(z.mean(x0)[0] == doctest::Approx(quad.weights.dot(y.head(5))).epsilon(1e-6));
}

namespace {

/// Two constraints observed exactly at (x0, u_j) for every node: at x0 the
/// posterior is degenerate and feasibility reduces to counting nodes.
struct ObservedConstraints {
  UncertaintyQuadrature quad;
  gp::ConstraintModel model;
  Eigen::VectorXd x0;
  double share = 0.0;
};

ObservedConstraints observed_constraints(bool coupled) {
  ObservedConstraints o{};
  o.x0 = Eigen::Vector2d(0.4, 0.4);
  o.quad.nodes.resize(10, 1);
  for (int j = 0; j < 10; ++j) o.quad.nodes(j, 0) = (j + 0.5) / 10.0;
  o.quad.weights = Eigen::VectorXd::Constant(10, 0.1);
  // g1 fails at nodes 7..9, g2 fails at node 0; 6 of 10 nodes feasible.
  Eigen::VectorXd g1(10), g2(10);
  for (int j = 0; j < 10; ++j) {
    g1[j] = j >= 7 ? 1.0 : -1.0 - 0.1 * j;
    g2[j] = j == 0 ? 0.5 : -2.0 + 0.05 * j;
  }
  o.share = 0.6;
  const gp::PointSet base = gp::PointSet::expand(o.x0, o.quad.nodes, 0);
  if (coupled) {
    gp::PointSet p = base.with_level(0);
    p.append(base.with_level(1));
    Eigen::VectorXd y(20);
    y << g1, g2;
    gp::KernelSpec s = gp::KernelSpec::multi_output(3, 2, 0.3);
    s.angles = {1.0};
    o.model = gp::ConstraintModel::coupled(gp::GpModel::condition(s, gp::InputBox::unit(3), p, y));
  } else {
    std::vector<gp::GpModel> ms{scalar_model(base, g1), scalar_model(base, g2)};
    o.model = gp::ConstraintModel::independent(std::move(ms));
  }
  return o;
}

}  // namespace

TEST_CASE("trajectory PoF counts feasible node shares on observed designs") {
  for (bool coupled : {false, true}) {
    const auto o = observed_constraints(coupled);
    CHECK(pof_trajectories(o.model, o.x0, o.quad, 100, 0.4, 1).pof == 1.0);
    CHECK(pof_trajectories(o.model, o.x0, o.quad, 100, 0.3, 1).pof == 0.0);
    CHECK(integrated_feasibility(o.model, o.x0, o.quad) == doctest::Approx(o.share).epsilon(1e-6));
    CHECK(expected_c(o.model, o.x0, o.quad, 0.3) == doctest::Approx(0.1).epsilon(1e-6));
  }
}

TEST_CASE("trajectory PoF is a probability and is reproducible") {
  const auto o = observed_constraints(true);
  const Eigen::Vector2d x(0.9, 0.1);
  const auto a = pof_trajectories(o.model, x, o.quad, 300, 0.1, 4);
  const auto b = pof_trajectories(o.model, x, o.quad, 300, 0.1, 4);
  CHECK(a.pof == b.pof);
  CHECK(a.pof >= 0.0);
  CHECK(a.pof <= 1.0);
  CHECK(a.n_traj == 300);
  // alpha = 1 accepts every trajectory.
  CHECK(pof_trajectories(o.model, x, o.quad, 50, 1.0, 4).pof == 1.0);
  // Larger alpha never lowers the PoF under common random numbers.
  const Eigen::MatrixXd n = trajectory_normals(20, 200, 8);
  double prev = 0.0;
  for (double alpha : {0.0, 0.1, 0.3, 0.6, 0.9}) {
    const double p = pof_trajectories(o.model, x, o.quad, alpha, n);
    CHECK(p >= prev);
    prev = p;
  }
  CHECK_THROWS_AS(pof_trajectories(o.model, x, o.quad, 0.1, Eigen::MatrixXd::Zero(3, 4)), ShapeError);
}

TEST_CASE("expected C stays within its bounds") {
  const auto o = observed_constraints(false);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector2d x(u(rng), u(rng));
    const double c = expected_c(o.model, x, o.quad, 0.05);
    CHECK(c >= -0.05 - 1e-12);
    CHECK(c <= 0.95 + 1e-12);
  }
}

TEST_CASE("incumbent matches a brute-force search") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd pts(30, 3);
  for (auto& v : pts.reshaped()) v = u(rng);
  Eigen::VectorXd yf(30), yg(30);
  for (Eigen::Index i = 0; i < 30; ++i) {
    yf[i] = -(pts(i, 0) + pts(i, 1)) + 0.2 * pts(i, 2);
    yg[i] = pts(i, 0) + pts(i, 1) - 1.0 + 0.3 * (pts(i, 2) - 0.5);
  }
  const gp::GpModel f = scalar_model(gp::PointSet(pts), yf);
  std::vector<gp::GpModel> gs{scalar_model(gp::PointSet(pts), yg)};
  const auto g = gp::ConstraintModel::independent(std::move(gs));
  const UncertaintyQuadrature quad = monte_carlo_quadrature(
      uniform_sampler(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)), 30, 2);
  const ZProcess z(f, quad);
  Eigen::MatrixXd cand(60, 2);
  for (auto& v : cand.reshaped()) v = u(rng);

  const Incumbent inc = incumbent_feasible_min(z, g, cand, quad, 0.1);
  const Eigen::VectorXd mz = z.mean(cand);
  double best = std::numeric_limits<double>::infinity();
  Eigen::Index arg = -1;
  for (Eigen::Index i = 0; i < cand.rows(); ++i)
    if (expected_c(g, cand.row(i).transpose(), quad, 0.1) <= 0.0 && mz[i] < best) best = mz[i], arg = i;
  REQUIRE(arg >= 0);
  CHECK(!inc.fallback);
  CHECK(inc.index == arg);
  CHECK(inc.value == best);
  CHECK(inc.expected_c <= 0.0);

  // Nothing can be feasible at alpha = 0 with a constraint violated somewhere.
  const Incumbent none = incumbent_feasible_min(z, g, cand.topRows(5), quad, -0.5);
  CHECK(none.fallback);
}
