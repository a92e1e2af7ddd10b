#pragma once

namespace fracpce {

/// log K_nu(x) for real order nu and x > 0, from
///   K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.
/// The integrand is scaled by its peak and integrated with the trapezoidal
/// rule (spectrally accurate for this even, analytic integrand), halving the
/// step until successive estimates agree; the tail is cut where the
/// integrand drops below 1e-18 of the peak. Validated for |nu| <= 50 and
/// x in [1e-3, 100]. Throws std::domain_error for x <= 0.
double log_bessel_k(double nu, double x);

/// Modified Bessel function of the second kind, K_nu(x).
double bessel_k(double nu, double x);

}  // namespace fracpce
