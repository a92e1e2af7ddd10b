#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "fracpce/polybasis.hpp"
#include "fracpce/sampling.hpp"

namespace fracpce {

/// Polynomial chaos surrogate: Y ~ sum_a beta_a Psi_a(xi).
struct PceModel {
  GermSpec germ;
  MultiIndexSet basis;
  Vector beta;
  double r2 = 0.0;  // in-sample coefficient of determination
  double q2 = 0.0;  // leave-one-out; NaN when not computable (n <= P)
  std::size_t n_train = 0;
};

/// Thrown by fit_ols when the design matrix does not have full column rank.
class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(std::size_t rank, std::size_t columns)
      : std::runtime_error("design matrix is rank deficient: numerical rank " + std::to_string(rank) + " of " +
                           std::to_string(columns) + " columns"),
        rank_(rank),
        columns_(columns) {}
  std::size_t rank() const { return rank_; }
  std::size_t columns() const { return columns_; }

 private:
  std::size_t rank_;
  std::size_t columns_;
};

/// Standardized moments of Y. Kurtosis is non-excess (Gaussian = 3).
struct MomentSet {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 3.0;
  double central3 = 0.0;
  double central4 = 0.0;
  double raw[4] = {0.0, 0.0, 0.0, 0.0};  // E[Y], E[Y^2], E[Y^3], E[Y^4]
  /// True when the 3rd/4th central moments came from surrogate sampling
  /// because the basis exceeded the exhaustive-summation cap.
  bool sampled_higher = false;
};

struct MomentOptions {
  std::size_t exhaustive_cap = 80;
  std::size_t fallback_samples = 1'000'000;
  std::uint64_t seed = 0x5EEDULL;
};

/// n x P matrix of basis evaluations, Psi(i,j) = Psi_j(xi^(i)).
Matrix design_matrix(const MultiIndexSet& basis, const GermSpec& germ, const Matrix& xi);

/// Ordinary least squares by column-pivoted Householder QR.
PceModel fit_ols(const ExperimentalDesign& ed, const MultiIndexSet& basis, const GermSpec& germ);

/// Surrogate evaluated at k germ points.
Vector eval_pce(const PceModel& model, const Matrix& xi);

/// 1 - MSE / Var(Y) on a validation design. Throws on zero response variance.
double r_squared(const PceModel& model, const ExperimentalDesign& validation);

/// Analytic leave-one-out Q^2 from the hat-matrix diagonal.
double q_squared_loo(const PceModel& model, const ExperimentalDesign& training);

/// Mean/variance from the coefficients; 3rd and 4th central moments from
/// products of basis functions, factorized per dimension.
MomentSet moments_from_pce(const PceModel& model, const MomentOptions& opts = {});

/// Raw moments and standardized shape from mean and central moments.
MomentSet moments_from_central(double mean, double variance, double central3, double central4);

}  // namespace fracpce
