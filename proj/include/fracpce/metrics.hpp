#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracpce {

/// Reference distribution used to score approximations.
class ReferenceCdf {
 public:
  enum class Kind { analytic_normal, empirical };

  static ReferenceCdf normal(double mean, double std);
  /// Takes ownership of the samples and sorts them. Needs at least
  /// `min_size` distinct-enough samples (nonzero spread).
  static ReferenceCdf empirical(std::vector<double> samples, std::size_t min_size = 1000);

  Kind kind() const { return kind_; }
  double operator()(double x) const;
  double quantile(double prob) const;
  double mean() const { return mean_; }
  double std() const { return std_; }
  const std::vector<double>& samples() const { return sorted_; }

 private:
  Kind kind_ = Kind::analytic_normal;
  double mean_ = 0.0;
  double std_ = 1.0;
  std::vector<double> sorted_;
};

/// Fraction of sorted samples <= x (right-continuous step function).
double empirical_cdf(std::span<const double> sorted_samples, double x);

/// F ln(F/G) + G - F, with the F = 0 term taken as G and G floored at 1e-300.
double kl_pointwise(double f_ref, double f_approx);

struct GridConfig {
  std::size_t points = 2048;
  double tail_prob = 1e-6;
  double extension = 0.1;  // fraction of the span added on each side
};

struct ErrorProfile {
  std::vector<double> grid;
  std::vector<double> reference;
  std::vector<double> approx;
  std::vector<double> divergence;
  double epsilon = 0.0;
};

std::vector<double> error_grid(const ReferenceCdf& ref, const GridConfig& cfg = {});

/// Trapezoidal integral of kl_pointwise over the grid; also returns the
/// pointwise profile. Throws std::domain_error on non-finite approx values.
ErrorProfile error_profile(const ReferenceCdf& ref, const std::function<double(double)>& approx_cdf,
                           const GridConfig& cfg = {});

double total_error(const ReferenceCdf& ref, const std::function<double(double)>& approx_cdf, const GridConfig& cfg = {});

}  // namespace fracpce
