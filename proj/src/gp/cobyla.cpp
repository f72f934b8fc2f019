#include "ccbo/gp/cobyla.hpp"

#include "ccbo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ccbo::gp {

namespace {

constexpr double kPenalty = 1e30;

class Simplex {
 public:
  Simplex(const std::function<double(const Eigen::VectorXd&)>& f, int max_evals) : f_(f), max_evals_(max_evals) {}

  double eval(const Eigen::VectorXd& x) {
    ++evals_;
    const double v = f_(x);
    return std::isfinite(v) ? std::min(v, kPenalty) : kPenalty;
  }
  bool exhausted() const { return evals_ >= max_evals_; }
  int evals() const { return evals_; }

 private:
  const std::function<double(const Eigen::VectorXd&)>& f_;
  int max_evals_;
  int evals_ = 0;
};

Eigen::VectorXd clip_unit(Eigen::VectorXd x) { return x.cwiseMax(0.0).cwiseMin(1.0); }

/// Minimizes g.d over {|d| <= rho, 0 <= x0 + d <= 1} by bisecting the
/// multiplier of the projected steepest-descent path d(lambda) = P(x0 - lambda g) - x0.
Eigen::VectorXd trust_step(const Eigen::VectorXd& x0, const Eigen::VectorXd& g, double rho) {
  auto step = [&](double lam) { return Eigen::VectorXd(clip_unit(x0 - lam * g) - x0); };
  const double gn = g.norm();
  if (gn == 0.0) return Eigen::VectorXd::Zero(x0.size());
  double hi = rho / gn;
  // The path saturates at the box; grow until it leaves the ball or stops moving.
  for (int i = 0; i < 60 && step(hi).norm() < rho; ++i) {
    const double before = step(hi).norm();
    hi *= 2.0;
    if (step(hi).norm() <= before + 1e-15) return step(hi);
  }
  double lo = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (step(mid).norm() <= rho ? lo : hi) = mid;
  }
  return step(lo);
}

}  // namespace

CobylaResult cobyla_minimize(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x0,
                             const CobylaOptions& options) {
  const Eigen::Index n = x0.size();
  if (n == 0) throw ShapeError("cobyla_minimize: empty parameter vector");
  if (options.rho_begin <= 0.0 || options.rho_end <= 0.0 || options.rho_end > options.rho_begin)
    throw DomainError("cobyla_minimize: need 0 < rho_end <= rho_begin");

  Simplex counter(f, std::max(options.max_evals, static_cast<int>(n) + 2));
  double rho = options.rho_begin;
  x0 = clip_unit(x0);

  // Vertices: column 0 is the best point, columns 1..n the others.
  Eigen::MatrixXd Y(n, n + 1);
  Eigen::VectorXd fv(n + 1);
  Y.col(0) = x0;
  fv[0] = counter.eval(x0);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd y = x0;
    y[i] += (x0[i] + rho <= 1.0) ? rho : -rho;
    Y.col(i + 1) = y;
    fv[i + 1] = counter.eval(y);
  }

  auto make_best_first = [&] {
    Eigen::Index best = 0;
    fv.minCoeff(&best);
    if (best != 0) {
      Y.col(0).swap(Y.col(best));
      std::swap(fv[0], fv[best]);
    }
  };

  bool repair = false;
  while (!counter.exhausted()) {
    make_best_first();
    Eigen::MatrixXd D(n, n);  // row i = y_{i+1} - y_0
    for (Eigen::Index i = 0; i < n; ++i) D.row(i) = (Y.col(i + 1) - Y.col(0)).transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(D);
    const bool singular = !lu.isInvertible();
    Eigen::MatrixXd B;  // column j solves D b = e_j
    Eigen::VectorXd g;
    if (!singular) {
      B = lu.inverse();
      g = B * (fv.tail(n).array() - fv[0]).matrix();
    }

    // Geometry check: vertex j too far or too close to the opposite face.
    Eigen::Index worst = -1;
    double worst_score = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dist = D.row(j).norm();
      const double sigma = singular ? 0.0 : 1.0 / B.col(j).norm();
      double score = 0.0;
      if (dist > 2.1 * rho) score = dist / rho;
      else if (sigma < 0.25 * rho) score = 0.25 * rho / std::max(sigma, 1e-300);
      if (score > worst_score) {
        worst_score = score;
        worst = j;
      }
    }
    const bool geometry_ok = worst < 0;

    bool take_geometry_step = !geometry_ok && (singular || repair);
    repair = false;
    Eigen::VectorXd d;
    if (!take_geometry_step) {
      d = trust_step(Y.col(0), g, rho);
      if (d.norm() < 0.5 * rho) {
        if (!geometry_ok) {
          take_geometry_step = true;
        } else {
          if (rho <= options.rho_end) break;
          rho = std::max(0.5 * rho, options.rho_end);
          continue;
        }
      }
    }

    if (take_geometry_step) {
      // Move the offending vertex along the dual direction (normal to the
      // opposite face), or along the largest coordinate of the lost direction.
      Eigen::VectorXd dir;
      if (!singular) {
        dir = B.col(worst) / B.col(worst).norm();
      } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeFullV);
        dir = svd.matrixV().col(n - 1);
        if (worst < 0) worst = n - 1;
      }
      Eigen::VectorXd best_step;
      double best_norm = -1.0;
      for (double sign : {1.0, -1.0}) {
        const Eigen::VectorXd s = clip_unit(Y.col(0) + sign * rho * dir) - Y.col(0);
        const double pref = (!singular && g.dot(sign * dir) < 0.0) ? 1.0 : 0.0;
        const double score = s.norm() + 1e-3 * rho * pref;
        if (score > best_norm) {
          best_norm = score;
          best_step = s;
        }
      }
      if (best_step.norm() < 0.1 * rho) {
        Eigen::Index k = 0;
        dir.cwiseAbs().maxCoeff(&k);
        best_step = Eigen::VectorXd::Zero(n);
        best_step[k] = (Y(k, 0) + rho <= 1.0) ? rho : -rho;
      }
      const Eigen::VectorXd y = Y.col(0) + best_step;
      Y.col(worst + 1) = y;
      fv[worst + 1] = counter.eval(y);
      continue;
    }

    const Eigen::VectorXd y = Y.col(0) + d;
    const double fy = counter.eval(y);
    const double predicted = -g.dot(d);
    const double ratio = predicted > 0.0 ? (fv[0] - fy) / predicted : -1.0;

    // Replace the vertex whose removal keeps the simplex best conditioned,
    // weighted toward far-away vertices.
    Eigen::Index replace = 0;
    double best_weight = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double far = std::max(1.0, (Y.col(j + 1) - y).norm() / rho);
      const double w = std::abs(B.col(j).dot(d)) * far * far;
      if (w > best_weight) {
        best_weight = w;
        replace = j;
      }
    }
    if (fy < fv[0]) {
      // New best: the old best stays in the simplex in the replaced slot.
      Y.col(replace + 1) = y;
      fv[replace + 1] = fy;
    } else if (best_weight > 1e-12) {
      Y.col(replace + 1) = y;
      fv[replace + 1] = fy;
    }

    if (ratio < 0.1) {
      if (!geometry_ok) {
        repair = true;
      } else {
        if (rho <= options.rho_end) break;
        rho = std::max(0.5 * rho, options.rho_end);
      }
    }
  }

  make_best_first();
  return {Y.col(0), fv[0], counter.evals()};
}

}  // namespace ccbo::gp
