#pragma once

#include <cstddef>
#include <functional>

namespace fracpce {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  std::size_t max_intervals = 2000;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature on a finite interval.
/// The interval with the largest error estimate is bisected until the total
/// estimate meets max(abs_tol, rel_tol*|I|) or the interval budget runs out.
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                const QuadratureOptions& opts = {});

}  // namespace fracpce
