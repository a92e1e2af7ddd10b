#include "fracpce/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracpce/special.hpp"

namespace fracpce {

std::string_view to_string(VariableKind k) {
  switch (k) {
    case VariableKind::normal: return "normal";
    case VariableKind::truncated_normal: return "truncated-normal";
    case VariableKind::uniform: return "uniform";
  }
  return "?";
}

VariableKind variable_kind_from_string(std::string_view name) {
  if (name == "normal") return VariableKind::normal;
  if (name == "truncated-normal" || name == "truncated_normal") return VariableKind::truncated_normal;
  if (name == "uniform") return VariableKind::uniform;
  throw std::invalid_argument("unknown variable kind '" + std::string(name) + "'");
}

InputVariable::InputVariable(VariableKind k, double mean, double std, double lower, double upper)
    : kind_(k), mean_(mean), std_(std), lower_(lower), upper_(upper) {
  if (!(std > 0.0) || !std::isfinite(std)) throw std::invalid_argument("InputVariable: std must be positive and finite");
  if (!std::isfinite(mean)) throw std::invalid_argument("InputVariable: mean must be finite");
  if (!(lower < upper)) throw std::invalid_argument("InputVariable: lower must be below upper");
  if (k == VariableKind::truncated_normal) {
    alpha_ = (lower - mean) / std;
    beta_ = (upper - mean) / std;
    upper_tail_ = alpha_ > 0.0;
    mass_ = upper_tail_ ? normal_sf(alpha_) - normal_sf(beta_) : normal_cdf(beta_) - normal_cdf(alpha_);
    if (!(mass_ > 0.0)) throw std::invalid_argument("InputVariable: truncation interval carries no mass");
  }
}

InputVariable InputVariable::normal(double mean, double std) {
  return InputVariable(VariableKind::normal, mean, std, -kInf, kInf);
}

InputVariable InputVariable::truncated_normal(double mean, double std, double lower, double upper) {
  if (std::isinf(lower) && std::isinf(upper)) return normal(mean, std);
  return InputVariable(VariableKind::truncated_normal, mean, std, lower, upper);
}

InputVariable InputVariable::truncated_normal_default(double mean, double std) {
  return truncated_normal(mean, std, std::max(0.0, mean - 4.0 * std), mean + 4.0 * std);
}

InputVariable InputVariable::uniform(double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper)) throw std::invalid_argument("uniform bounds must be finite");
  if (!(lower < upper)) throw std::invalid_argument("InputVariable: lower must be below upper");
  return InputVariable(VariableKind::uniform, 0.5 * (lower + upper), (upper - lower) / std::sqrt(12.0), lower, upper);
}

double InputVariable::pdf(double x) const {
  switch (kind_) {
    case VariableKind::normal: return normal_pdf((x - mean_) / std_) / std_;
    case VariableKind::truncated_normal:
      if (x < lower_ || x > upper_) return 0.0;
      return normal_pdf((x - mean_) / std_) / (std_ * mass_);
    case VariableKind::uniform: return in_support(x) ? 1.0 / (upper_ - lower_) : 0.0;
  }
  return 0.0;
}

double InputVariable::cdf(double x) const {
  switch (kind_) {
    case VariableKind::normal: return normal_cdf((x - mean_) / std_);
    case VariableKind::truncated_normal: {
      if (x <= lower_) return 0.0;
      if (x >= upper_) return 1.0;
      const double z = (x - mean_) / std_;
      const double v = upper_tail_ ? (normal_sf(alpha_) - normal_sf(z)) / mass_ : (normal_cdf(z) - normal_cdf(alpha_)) / mass_;
      return std::clamp(v, 0.0, 1.0);
    }
    case VariableKind::uniform:
      if (x <= lower_) return 0.0;
      if (x >= upper_) return 1.0;
      return (x - lower_) / (upper_ - lower_);
  }
  return 0.0;
}

double InputVariable::inverse_cdf(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("inverse_cdf: u must lie in (0,1)");
  switch (kind_) {
    case VariableKind::normal: return mean_ + std_ * normal_quantile(u);
    case VariableKind::truncated_normal: {
      double z;
      if (upper_tail_) {
        z = normal_quantile_upper(normal_sf(alpha_) - u * mass_);
      } else {
        z = normal_quantile(normal_cdf(alpha_) + u * mass_);
      }
      return std::clamp(mean_ + std_ * z, lower_, upper_);
    }
    case VariableKind::uniform: return lower_ + u * (upper_ - lower_);
  }
  return 0.0;
}

GermSpec natural_germ(const InputVector& inputs) {
  GermSpec g;
  for (const auto& v : inputs) g.families.push_back(v.natural_family());
  return g;
}

double germ_cdf(Family f, double xi) {
  if (f == Family::hermite) return normal_cdf(xi);
  return std::clamp(0.5 * (xi + 1.0), 0.0, 1.0);
}

double germ_inverse_cdf(Family f, double u) {
  if (f == Family::hermite) return normal_quantile(u);
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("germ_inverse_cdf: u must lie in [0,1]");
  return 2.0 * u - 1.0;
}

double to_germ_1d(double x, const InputVariable& v, Family f) {
  if (!std::isfinite(x) || !v.in_support(x)) throw std::domain_error("to_germ: value outside the variable's support");
  if (v.kind() == VariableKind::normal && f == Family::hermite) return (x - v.mean()) / v.std();
  if (v.kind() == VariableKind::uniform && f == Family::legendre)
    return 2.0 * (x - v.lower()) / (v.upper() - v.lower()) - 1.0;
  const double u = v.cdf(x);
  if (f == Family::hermite && (u <= 0.0 || u >= 1.0))
    throw std::domain_error("to_germ: value sits on the support boundary of an unbounded germ");
  return germ_inverse_cdf(f, u);
}

double from_germ_1d(double xi, const InputVariable& v, Family f) {
  if (v.kind() == VariableKind::normal && f == Family::hermite) return v.mean() + v.std() * xi;
  if (v.kind() == VariableKind::uniform && f == Family::legendre)
    return v.lower() + 0.5 * (xi + 1.0) * (v.upper() - v.lower());
  if (f == Family::hermite && xi > 0.0) {
    // Use the upper tail to keep resolution for large xi.
    const double q = normal_sf(xi);
    if (q <= 0.0) return v.upper();
    return v.inverse_cdf(1.0 - q);
  }
  const double u = germ_cdf(f, xi);
  if (u <= 0.0) return v.lower();
  if (u >= 1.0) return v.upper();
  return v.inverse_cdf(u);
}

namespace {
void check_dims(std::size_t n, const InputVector& inputs, const GermSpec& germ) {
  if (n != inputs.size() || n != germ.dimension())
    throw std::invalid_argument("germ transform: dimension mismatch");
}
}  // namespace

std::vector<double> to_germ(std::span<const double> x, const InputVector& inputs, const GermSpec& germ) {
  check_dims(x.size(), inputs, germ);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = to_germ_1d(x[i], inputs[i], germ.families[i]);
  return out;
}

std::vector<double> from_germ(std::span<const double> xi, const InputVector& inputs, const GermSpec& germ) {
  check_dims(xi.size(), inputs, germ);
  std::vector<double> out(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) out[i] = from_germ_1d(xi[i], inputs[i], germ.families[i]);
  return out;
}

}  // namespace fracpce
