#pragma once

namespace nfsic {

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x),
// series expansion for x < a + 1 and continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Chi-squared distribution with dof degrees of freedom.
double chi2_cdf(int dof, double x);
double chi2_sf(int dof, double x);

// prob-quantile, inverted by bisection; absolute accuracy well below 1e-8.
double chi2_quantile(int dof, double prob);

}  // namespace nfsic
