#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "fracpce/polybasis.hpp"

namespace fracpce {

enum class VariableKind { normal, truncated_normal, uniform };

std::string_view to_string(VariableKind k);
VariableKind variable_kind_from_string(std::string_view name);

/// One independent input random variable. For the normal kinds `mean` and
/// `std` are the parameters of the (parent) Gaussian; for uniform they are
/// derived from [lower, upper].
class InputVariable {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  static InputVariable normal(double mean, double std);
  static InputVariable truncated_normal(double mean, double std, double lower, double upper = kInf);
  /// Truncation at [max(0, mean - 4 std), mean + 4 std].
  static InputVariable truncated_normal_default(double mean, double std);
  static InputVariable uniform(double lower, double upper);

  VariableKind kind() const { return kind_; }
  double mean() const { return mean_; }
  double std() const { return std_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }

  double pdf(double x) const;
  double cdf(double x) const;
  /// Throws std::domain_error unless 0 < u < 1.
  double inverse_cdf(double u) const;
  bool in_support(double x) const { return x >= lower_ && x <= upper_; }

  /// The Wiener-Askey germ family natural for this variable.
  Family natural_family() const { return kind_ == VariableKind::uniform ? Family::legendre : Family::hermite; }

 private:
  InputVariable(VariableKind k, double mean, double std, double lower, double upper);

  VariableKind kind_;
  double mean_;
  double std_;
  double lower_;
  double upper_;
  // Standardized truncation bounds and the retained mass, for truncated-normal.
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double mass_ = 1.0;
  bool upper_tail_ = false;  // compute with survival functions when alpha > 0
};

using InputVector = std::vector<InputVariable>;

GermSpec natural_germ(const InputVector& inputs);

/// Germ CDF G and its inverse.
double germ_cdf(Family f, double xi);
double germ_inverse_cdf(Family f, double u);

/// xi_i = G_i^{-1}(F_{X_i}(x_i)). Throws std::domain_error outside the support.
std::vector<double> to_germ(std::span<const double> x, const InputVector& inputs, const GermSpec& germ);

/// x_i = F_{X_i}^{-1}(G_i(xi_i)).
std::vector<double> from_germ(std::span<const double> xi, const InputVector& inputs, const GermSpec& germ);

double to_germ_1d(double x, const InputVariable& v, Family f);
double from_germ_1d(double xi, const InputVariable& v, Family f);

}  // namespace fracpce
