#pragma once

namespace ccbo::acq {

/// E[max(z - Y, 0)] for Y ~ N(m, sigma^2); max(z - m, 0) when sigma == 0.
double expected_improvement(double m, double sigma, double z);

/// Var[max(z - Y, 0)] for Y ~ N(m, sigma^2); 0 when sigma == 0.
double improvement_variance(double m, double sigma, double z);

}  // namespace ccbo::acq
