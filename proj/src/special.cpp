#include "fracpce/special.hpp"

#include <cmath>
#include <stdexcept>

namespace fracpce {

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_sf(double z) { return 0.5 * std::erfc(z / kSqrt2); }

double log_normal_cdf(double z) {
  if (z > 5.0) return std::log1p(-normal_sf(z));
  if (z > -30.0) return std::log(normal_cdf(z));
  // Mills ratio series: Phi(z) ~ phi(z)/|z| * (1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8)
  const double z2 = z * z;
  const double inv = 1.0 / z2;
  const double series = 1.0 - inv * (1.0 - 3.0 * inv * (1.0 - 5.0 * inv * (1.0 - 7.0 * inv)));
  return -0.5 * z2 - kLogSqrt2Pi - std::log(-z) + std::log(series);
}

namespace {

// Acklam's rational approximation, relative error below 1.2e-9.
double acklam(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: probability must lie in (0,1)");
  if (p > 0.5) return normal_quantile_upper(1.0 - p);
  double z = acklam(p);
  // Newton step on Phi(z) - p, done on the lower tail where Phi is accurate.
  const double err = normal_cdf(z) - p;
  const double dens = normal_pdf(z);
  if (dens > 0.0) z -= err / dens;
  return z;
}

double normal_quantile_upper(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("normal_quantile_upper: probability must lie in (0,1)");
  if (q > 0.5) return -normal_quantile(q);
  double z = -acklam(q);
  const double err = normal_sf(z) - q;
  const double dens = normal_pdf(z);
  if (dens > 0.0) z += err / dens;
  return z;
}

}  // namespace fracpce
