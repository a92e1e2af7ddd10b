#pragma once

// Mixture of an extended inverse Gaussian and a log extended skew-normal
// distribution on x > 0 (M-EIGD-LESND), its fractional moments and the
// moment-matching fitter.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracpce/fracmoments.hpp"

namespace fracpce {

struct MeigdParams {
  double w = 0.5;      // weight of the inverse Gaussian part, [0,1]
  double eta = 1.0;    // power transform of the inverse Gaussian part, > 0
  double a = 1.0;      // > 0
  double b = 1.0;      // > 0
  double c = 0.0;      // location of log x in the skew-normal part
  double d = 1.0;      // scale of log x, > 0
  double theta = 0.0;  // skewness
  double tau = 0.0;    // extension

  /// Throws std::domain_error when a bound is violated.
  void validate() const;
  bool valid() const noexcept;
};

/// Density; 0 for x <= 0.
double meigd_pdf(const MeigdParams& p, double x);

/// Density of u = ln x, i.e. x * pdf(x). Smooth on the whole real line.
double meigd_log_space_density(const MeigdParams& p, double u);

/// E[X^r]. Throws std::overflow_error when a component overflows.
double meigd_fractional_moment(const MeigdParams& p, double r);

/// log E[X^r]; same failure modes as meigd_fractional_moment.
double meigd_log_fractional_moment(const MeigdParams& p, double r);

/// Weighted component terms of log E[X^r] (no validation; -inf for an absent
/// component) and their overflow-checked log-sum. The fitter reuses the
/// inverse Gaussian term, which is the costly one, across Jacobian columns.
double meigd_log_ig_moment(const MeigdParams& p, double r);
double meigd_log_lesn_moment(const MeigdParams& p, double r);
double meigd_combine_log_moments(double log_ig, double log_lesn, double r);

/// CDF by adaptive quadrature of the log-space density over cached panels:
/// `panels` across the whole support plus a finer grid over each component.
/// Construct once per parameter set, then query many points.
class MeigdCdf {
 public:
  explicit MeigdCdf(const MeigdParams& p, std::size_t panels = 96);

  double operator()(double x) const;
  /// Mass captured by the panel grid (should be 1 to quadrature accuracy).
  double total_mass() const { return cumulative_.back(); }
  double log_lower() const { return u_lo_; }
  double log_upper() const { return u_hi_; }
  /// Differential entropy of X, integrated over the panel grid.
  double entropy() const;
  /// Inverse CDF by bisection in log space.
  double quantile(double prob) const;

 private:
  double partial(std::size_t panel, double u) const;

  MeigdParams p_;
  double u_lo_ = 0.0;
  double u_hi_ = 0.0;
  std::vector<double> knots_;       // panel edges in u = ln x
  std::vector<double> cumulative_;  // cumulative_[k] = mass below knots_[k]
};

/// One-off CDF evaluation (builds the panel grid each call).
double meigd_cdf(const MeigdParams& p, double x);

struct FitConfig {
  std::size_t starts = 50;
  std::uint64_t seed = 0x3E16DULL;
  double tolerance = 1e-6;
  std::size_t max_iterations = 250;
  double eta_min = 0.1;
  double eta_max = 20.0;
  /// Each component's standard deviation in ln x is kept above this fraction
  /// of the spread of ln X implied by the targets.
  double min_width_fraction = 0.05;
  /// Select by largest entropy of X among converged starts (or, when none
  /// converged, starts within `tolerance` of the best). Off: lowest residual.
  bool prefer_spread = true;
  /// Stop the multistart once this many starts have converged (0: run all).
  std::size_t stop_after_converged = 0;
};

struct FitResult {
  MeigdParams params;
  double residual = 0.0;  // sum of squared relative moment mismatches
  std::size_t starts_used = 0;
  std::size_t best_start = 0;
  std::size_t converged_starts = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

/// Thrown when no start produced a finite objective.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, FitResult best) : std::runtime_error(what), best_(best) {}
  const FitResult& best_seen() const { return best_; }

 private:
  FitResult best_;
};

/// Relative mismatch vector (M^r_k(params) - t_k) / t_k.
std::vector<double> meigd_moment_residuals(const MeigdParams& p, std::span<const double> orders,
                                           std::span<const double> targets);

/// Damped least-squares (Levenberg-Marquardt) moment matching with a seeded
/// multistart in unconstrained coordinates.
FitResult fit_meigd(const FractionalMomentSet& target, const FitConfig& config = {});

}  // namespace fracpce
