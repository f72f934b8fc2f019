#include "ccbo/robust/mvn_cdf.hpp"

#include "ccbo/errors.hpp"
#include "ccbo/gp/linalg.hpp"
#include "ccbo/robust/normal.hpp"
#include "ccbo/robust/quadrature.hpp"
#include "ccbo/seed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace ccbo::robust {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct HalfRule {
  std::vector<double> x, w;  // negative-half nodes of an even Gauss-Legendre rule
};

HalfRule half_rule(int n) {
  const auto [x, w] = gauss_legendre(n);
  HalfRule r;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] < 0.0) {
      r.x.push_back(x[i]);
      r.w.push_back(w[i]);
    }
  return r;
}

const HalfRule& rule_for(double r) {
  static const std::array<HalfRule, 3> rules{half_rule(6), half_rule(12), half_rule(20)};
  const double a = std::abs(r);
  return a < 0.3 ? rules[0] : (a < 0.75 ? rules[1] : rules[2]);
}

/// Upper orthant P(X > h, Y > k), Drezner-Wesolowsky with Genz's refinements.
double bvn_upper(double h, double k, double r) {
  const HalfRule& g = rule_for(r);
  double hk = h * k;
  double bvn = 0.0;
  if (std::abs(r) < 0.925) {
    const double hs = 0.5 * (h * h + k * k);
    const double asr = std::asin(r);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      for (double s : {-1.0, 1.0}) {
        const double sn = std::sin(0.5 * asr * (s * g.x[i] + 1.0));
        bvn += g.w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    return bvn * asr / (2.0 * kTwoPi) + norm_cdf(-h) * norm_cdf(-k);
  }
  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::abs(r) < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    bvn = a * std::exp(-0.5 * (bs / as + hk)) * (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    if (hk > -160.0) {
      const double b = std::sqrt(bs);
      bvn -= std::exp(-0.5 * hk) * std::sqrt(kTwoPi) * norm_cdf(-b / a) * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a *= 0.5;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      for (double s : {-1.0, 1.0}) {
        const double xs = (a * (s * g.x[i] + 1.0)) * (a * (s * g.x[i] + 1.0));
        const double rs = std::sqrt(1.0 - xs);
        bvn += a * g.w[i] *
               (std::exp(-bs / (2.0 * xs) - hk / (1.0 + rs)) / rs - std::exp(-0.5 * (bs / xs + hk)) * (1.0 + c * xs * (1.0 + d * xs)));
      }
    }
    bvn = -bvn / kTwoPi;
  }
  if (r > 0.0) return bvn + norm_cdf(-std::max(h, k));
  bvn = -bvn;
  if (k > h) bvn += (h < 0.0) ? norm_cdf(k) - norm_cdf(h) : norm_cdf(-h) - norm_cdf(-k);
  return bvn;
}

double richtmyer(int dim) {
  static const std::array<int, 24> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37,
                                          41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
  if (dim >= static_cast<int>(primes.size())) throw DomainError("mvn_cdf: dimension too large");
  const double s = std::sqrt(static_cast<double>(primes[static_cast<std::size_t>(dim)]));
  return s - std::floor(s);
}

MvnResult genz_sov(const Eigen::VectorXd& b, const Eigen::MatrixXd& cov, const MvnOptions& options, bool clipped) {
  const Eigen::Index l = b.size();
  const gp::CovarianceFactor fac = gp::factor_covariance(cov);
  const Eigen::MatrixXd& C = fac.lower;
  std::vector<double> z(static_cast<std::size_t>(l - 1));
  for (Eigen::Index i = 0; i + 1 < l; ++i) z[static_cast<std::size_t>(i)] = richtmyer(static_cast<int>(i));

  Rng rng(options.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> shift(z.size()), y(static_cast<std::size_t>(l));
  double sum = 0.0, sum_sq = 0.0;
  const double e1 = C(0, 0) > 0.0 ? norm_cdf(b[0] / C(0, 0)) : (b[0] >= 0.0 ? 1.0 : 0.0);
  for (int s = 0; s < options.shifts; ++s) {
    for (double& v : shift) v = unif(rng);
    double acc = 0.0;
    for (int k = 1; k <= options.points; ++k) {
      double e = e1, f = e1;
      for (Eigen::Index i = 1; i < l && f > 0.0; ++i) {
        double w = k * z[static_cast<std::size_t>(i - 1)] + shift[static_cast<std::size_t>(i - 1)];
        w = std::abs(2.0 * (w - std::floor(w)) - 1.0);
        y[static_cast<std::size_t>(i - 1)] = norm_quantile(w * e);
        double t = b[i];
        for (Eigen::Index j = 0; j < i; ++j) t -= C(i, j) * y[static_cast<std::size_t>(j)];
        e = C(i, i) > 0.0 ? norm_cdf(t / C(i, i)) : (t >= 0.0 ? 1.0 : 0.0);
        f *= e;
      }
      acc += f;
    }
    const double est = acc / options.points;
    sum += est;
    sum_sq += est * est;
  }
  const double n = options.shifts;
  const double mean = sum / n;
  const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
  return {std::clamp(mean, 0.0, 1.0), 3.0 * std::sqrt(var / n), clipped || fac.clipped};
}

}  // namespace

double bvn_cdf(double h, double k, double r) {
  r = std::clamp(r, -1.0, 1.0);
  return std::clamp(bvn_upper(-h, -k, r), 0.0, 1.0);
}

MvnResult mvn_cdf(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov, const Eigen::VectorXd& upper,
                  const MvnOptions& options) {
  const Eigen::Index l = mean.size();
  if (l == 0 || cov.rows() != l || cov.cols() != l || upper.size() != l) throw ShapeError("mvn_cdf: inconsistent sizes");
  if (options.points < 1 || options.shifts < 1) throw DomainError("mvn_cdf: need positive QMC sizes");

  Eigen::MatrixXd S = 0.5 * (cov + cov.transpose());
  bool clipped = false;
  if (l > 2) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12 * std::max(S.trace(), 1e-300)) S = gp::clip_to_psd(S, &clipped);
  }
  for (Eigen::Index i = 0; i < l; ++i)
    if (S(i, i) < 0.0) {
      S(i, i) = 0.0;
      clipped = true;
    }

  // Zero-variance components are deterministic and factor out.
  double indicator = 1.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < l; ++i) {
    if (S(i, i) > 0.0) {
      keep.push_back(i);
    } else if (mean[i] > upper[i]) {
      indicator = 0.0;
    }
  }
  if (indicator == 0.0) return {0.0, 0.0, clipped};
  const auto n = static_cast<Eigen::Index>(keep.size());
  if (n == 0) return {1.0, 0.0, clipped};

  Eigen::VectorXd b(n), sd(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    sd[a] = std::sqrt(S(keep[a], keep[a]));
    b[a] = upper[keep[a]] - mean[keep[a]];
  }
  bool diagonal = true;
  for (Eigen::Index a = 0; a < n && diagonal; ++a)
    for (Eigen::Index c = a + 1; c < n; ++c)
      if (std::abs(S(keep[a], keep[c])) > 1e-12 * sd[a] * sd[c]) {
        diagonal = false;
        break;
      }
  if (diagonal) {
    double p = 1.0;
    for (Eigen::Index a = 0; a < n; ++a) p *= norm_cdf(b[a] / sd[a]);
    return {p, 0.0, clipped};
  }
  if (n == 2) {
    double r = S(keep[0], keep[1]) / (sd[0] * sd[1]);
    if (std::abs(r) > 1.0) clipped = true;
    return {bvn_cdf(b[0] / sd[0], b[1] / sd[1], r), 0.0, clipped};
  }
  Eigen::MatrixXd Sk(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index c = 0; c < n; ++c) Sk(a, c) = S(keep[a], keep[c]);
  return genz_sov(b, Sk, options, clipped);
}

}  // namespace ccbo::robust
