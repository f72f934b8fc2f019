#include "ccbo/robust/normal.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ccbo::robust {

double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double norm_quantile(double p) {
  constexpr double tiny = std::numeric_limits<double>::min();
  p = std::clamp(p, tiny, 1.0 - std::numeric_limits<double>::epsilon() / 2);
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

}  // namespace ccbo::robust
