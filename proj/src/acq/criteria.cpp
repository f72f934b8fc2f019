#include "ccbo/acq/criteria.hpp"

#include "ccbo/errors.hpp"
#include "ccbo/robust/normal.hpp"

#include <algorithm>

namespace ccbo::acq {

double expected_improvement(double m, double sigma, double z) {
  if (sigma < 0.0) throw DomainError("expected_improvement: negative sigma");
  const double d = z - m;
  if (sigma == 0.0) return std::max(d, 0.0);
  const double t = d / sigma;
  return std::max(0.0, d * robust::norm_cdf(t) + sigma * robust::norm_pdf(t));
}

double improvement_variance(double m, double sigma, double z) {
  if (sigma < 0.0) throw DomainError("improvement_variance: negative sigma");
  if (sigma == 0.0) return 0.0;
  const double d = z - m;
  const double ei = expected_improvement(m, sigma, z);
  return std::max(0.0, ei * (d - ei) + sigma * sigma * robust::norm_cdf(d / sigma));
}

}  // namespace ccbo::acq
