#include "fracpce/bessel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracpce {

namespace {

// log(exp(-x cosh t) cosh(nu t)) for nu >= 0.
inline double log_integrand(double nu, double x, double t) {
  const double nt = nu * t;
  return -x * std::cosh(t) + nt + std::log1p(std::exp(-2.0 * nt)) - 0.6931471805599453;
}

// Same quantity minus its value at t0, arranged to avoid cancellation when x is large:
// cosh t - cosh t0 = 2 sinh((t + t0)/2) sinh((t - t0)/2).
inline double log_integrand_rel(double nu, double x, double t, double t0) {
  return -2.0 * x * std::sinh(0.5 * (t + t0)) * std::sinh(0.5 * (t - t0)) + nu * (t - t0) +
         std::log1p(std::exp(-2.0 * nu * t)) - std::log1p(std::exp(-2.0 * nu * t0));
}

constexpr double kTailLog = -41.45;  // ln(1e-18)

}  // namespace

double log_bessel_k(double nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_k: argument must be positive and finite");
  if (!std::isfinite(nu)) throw std::domain_error("bessel_k: order must be finite");
  nu = std::abs(nu);

  // Peak of the log-integrand: -x sinh t + nu tanh(nu t) = 0, near asinh(nu/x).
  double t_peak = std::asinh(nu / x);
  for (int it = 0; it < 30 && t_peak > 0.0; ++it) {
    const double g1 = -x * std::sinh(t_peak) + nu * std::tanh(nu * t_peak);
    const double sech = 1.0 / std::cosh(nu * t_peak);
    const double g2 = -x * std::cosh(t_peak) + nu * nu * sech * sech;
    if (g2 >= 0.0) break;
    const double step = g1 / g2;
    t_peak = std::max(0.0, t_peak - step);
    if (std::abs(step) < 1e-12 * (1.0 + t_peak)) break;
  }
  const double g_peak = log_integrand(nu, x, t_peak);

  // Walk right of the peak until the integrand is negligible.
  double width = 1.0 / std::sqrt(x * std::cosh(t_peak) + 1e-300);
  width = std::min(std::max(width, std::numeric_limits<double>::min()), 4.0);
  double t_max = t_peak + width;
  while (log_integrand_rel(nu, x, t_max, t_peak) > kTailLog) {
    width *= 1.5;
    t_max = t_peak + width;
  }

  // And left of it: for large nu / x the peak sits far from 0 and the
  // integrand rises like exp(nu t) towards it.
  double t_min = 0.0;
  if (t_peak > width) {
    double left = width;
    while (t_peak - left > 0.0 && log_integrand_rel(nu, x, t_peak - left, t_peak) > kTailLog) left *= 1.5;
    t_min = std::max(0.0, t_peak - left);
  }

  auto f = [&](double t) { return std::exp(log_integrand_rel(nu, x, t, t_peak)); };

  // The integrand is even and analytic and negligible at a cut end, so the
  // trapezoid rule converges geometrically. Each value carries ~1e-14 relative
  // roundoff, so refinement also stops once the change no longer shrinks.
  int n = 16;
  double h = (t_max - t_min) / n;
  double sum = 0.5 * f(t_min);
  for (int k = 1; k < n; ++k) sum += f(t_min + k * h);
  double trap = h * sum;
  double prev_change = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 14; ++level) {
    double odd = 0.0;
    for (int k = 1; k < 2 * n; k += 2) odd += f(t_min + k * 0.5 * h);
    const double next = 0.5 * trap + 0.5 * h * odd;
    n *= 2;
    h *= 0.5;
    const double change = std::abs(next - trap);
    const bool done = level >= 1 && (change <= 1e-13 * next || (change >= prev_change && change <= 1e-10 * next));
    trap = next;
    prev_change = change;
    if (done) break;
  }
  return g_peak + std::log(trap);
}

double bessel_k(double nu, double x) { return std::exp(log_bessel_k(nu, x)); }

}  // namespace fracpce
