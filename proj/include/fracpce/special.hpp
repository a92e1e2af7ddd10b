#pragma once

namespace fracpce {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

/// Standard normal density.
double normal_pdf(double z);

/// Standard normal CDF, Phi(z).
double normal_cdf(double z);

/// Upper tail 1 - Phi(z), accurate for large z.
double normal_sf(double z);

/// log Phi(z), finite for any finite z (asymptotic series in the far left tail).
double log_normal_cdf(double z);

/// Inverse standard normal CDF. Rational approximation refined by one Newton step.
/// Throws std::domain_error unless 0 < p < 1.
double normal_quantile(double p);

/// Inverse of the upper tail: returns z with normal_sf(z) == q.
double normal_quantile_upper(double q);

}  // namespace fracpce
