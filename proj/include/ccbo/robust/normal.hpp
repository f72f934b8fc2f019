#pragma once

namespace ccbo::robust {

double norm_pdf(double z);
double norm_cdf(double z);
/// Inverse standard normal CDF; p is clamped to (0, 1) in the open sense.
double norm_quantile(double p);

}  // namespace ccbo::robust
