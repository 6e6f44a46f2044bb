#include <cmath>
#include <numbers>

#include "nppopt/errors.hpp"
#include "nppopt/numerics.hpp"
#include "nppopt/types.hpp"

namespace nppopt {

namespace {

// lgamma(x) - Stirling main term, valid for x >= 10.
double lgamma_correction(double x) {
  const double x2 = 1.0 / (x * x);
  return (1.0 / 12.0 -
          x2 * (1.0 / 360.0 -
                x2 * (1.0 / 1260.0 - x2 * (1.0 / 1680.0 - x2 * (1.0 / 1188.0 - x2 * 691.0 / 360360.0))))) /
         x;
}

constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;

}  // namespace

namespace numerics {

double log_beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError("log_beta_fn: arguments must be positive and finite");
  const double p = std::min(a, b);
  const double q = std::max(a, b);
  if (p >= 10.0) {
    const double corr = lgamma_correction(p) + lgamma_correction(q) - lgamma_correction(p + q);
    return -0.5 * std::log(q) + kLnSqrt2Pi + corr + (p - 0.5) * std::log(p / (p + q)) +
           q * std::log1p(-p / (p + q));
  }
  if (q >= 10.0) {
    const double corr = lgamma_correction(q) - lgamma_correction(p + q);
    return std::lgamma(p) + corr + p - p * std::log(p + q) + (q - 0.5) * std::log1p(-p / (p + q));
  }
  return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace numerics

void BetaParams::validate() const {
  if (!(alpha0 > 0.0) || !(beta0 > 0.0) || !std::isfinite(alpha0) || !std::isfinite(beta0))
    throw DomainError("beta prior shapes must be positive and finite");
}

double BetaParams::log_density(double a, double one_minus_a) const {
  return (alpha0 - 1.0) * std::log(a) + (beta0 - 1.0) * std::log(one_minus_a) -
         numerics::log_beta_fn(alpha0, beta0);
}

}  // namespace nppopt
