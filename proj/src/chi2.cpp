#include "nfsic/chi2.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nfsic/common.hpp"

namespace nfsic {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Lower regularized incomplete gamma by series, valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma by Lentz continued fraction,
// valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw InputError("gamma_p: a must be positive");
  if (x < 0.0) throw InputError("gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw InputError("gamma_q: a must be positive");
  if (x < 0.0) throw InputError("gamma_q: x must be nonnegative");
  if (x == 0.0) return 1.0;
  return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi2_cdf(int dof, double x) {
  if (dof < 1) throw InputError("chi2_cdf: dof must be >= 1");
  if (x < 0.0) throw InputError("chi2_cdf: x must be nonnegative");
  return gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_sf(int dof, double x) {
  if (dof < 1) throw InputError("chi2_sf: dof must be >= 1");
  if (x < 0.0) throw InputError("chi2_sf: x must be nonnegative");
  return gamma_q(0.5 * dof, 0.5 * x);
}

double chi2_quantile(int dof, double prob) {
  if (dof < 1) throw InputError("chi2_quantile: dof must be >= 1");
  if (!(prob > 0.0 && prob < 1.0)) {
    throw InputError("chi2_quantile: prob must be in (0, 1), got " +
                     std::to_string(prob));
  }
  double lo = 0.0;
  double hi = std::max(16.0, 4.0 * dof);
  while (chi2_cdf(dof, hi) < prob) {
    hi *= 2.0;
    if (hi > 1e12) break;
  }
  for (int i = 0; i < 200 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (chi2_cdf(dof, mid) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace nfsic
