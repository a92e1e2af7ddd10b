#include "fracpce/meigd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "fracpce/bessel.hpp"
#include "fracpce/quadrature.hpp"
#include "fracpce/special.hpp"

namespace fracpce {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMaxLog = 709.0;

double log_ig_part(const MeigdParams& p, double u) {
  // y = x^eta; b (y-a)^2 / (2 y a^2) == (b/a)(cosh v - 1) with v = ln(y/a).
  const double v = p.eta * u - std::log(p.a);
  return std::log(p.w) + std::log(p.eta) + 0.5 * std::log(p.b / (2.0 * kPi)) - 0.5 * p.eta * u -
         (p.b / p.a) * (std::cosh(v) - 1.0);
}

double log_lesn_part(const MeigdParams& p, double u) {
  const double z = (u - p.c) / p.d;
  const double ext = p.tau * std::sqrt(1.0 + p.theta * p.theta) + p.theta * z;
  return std::log1p(-p.w) - std::log(p.d) - 0.5 * z * z - kLogSqrt2Pi + log_normal_cdf(ext) - log_normal_cdf(p.tau);
}

}  // namespace

bool MeigdParams::valid() const noexcept {
  const bool finite = std::isfinite(w) && std::isfinite(eta) && std::isfinite(a) && std::isfinite(b) &&
                      std::isfinite(c) && std::isfinite(d) && std::isfinite(theta) && std::isfinite(tau);
  return finite && w >= 0.0 && w <= 1.0 && eta > 0.0 && a > 0.0 && b > 0.0 && d > 0.0;
}

void MeigdParams::validate() const {
  if (!valid()) throw std::domain_error("MeigdParams: parameters outside their bounds or non-finite");
}

double meigd_log_space_density(const MeigdParams& p, double u) {
  double h = 0.0;
  if (p.w > 0.0) {
    const double l = log_ig_part(p, u);
    if (l > -745.0) h += std::exp(l);
  }
  if (p.w < 1.0) {
    const double l = log_lesn_part(p, u);
    if (l > -745.0) h += std::exp(l);
  }
  return h;
}

double meigd_pdf(const MeigdParams& p, double x) {
  p.validate();
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 0.0;
  return meigd_log_space_density(p, std::log(x)) / x;
}

double meigd_log_ig_moment(const MeigdParams& p, double r) {
  if (p.w <= 0.0) return kNegInf;
  const double phi = p.b / p.a;
  return std::log(p.w) + phi + log_bessel_k(0.5 - r / p.eta, phi) + 0.5 * std::log(2.0 * p.b / kPi) +
         (r / p.eta - 0.5) * std::log(p.a);
}

double meigd_log_lesn_moment(const MeigdParams& p, double r) {
  if (p.w >= 1.0) return kNegInf;
  return std::log1p(-p.w) + p.c * r + 0.5 * p.d * p.d * r * r +
         log_normal_cdf(p.tau + p.theta * p.d * r / std::sqrt(1.0 + p.theta * p.theta)) - log_normal_cdf(p.tau);
}

double meigd_combine_log_moments(double log_ig, double log_lesn, double r) {
  if (log_ig > kMaxLog || log_lesn > kMaxLog || std::isnan(log_ig) || std::isnan(log_lesn))
    throw std::overflow_error("meigd_fractional_moment: overflow at r=" + std::to_string(r) +
                              " (log inverse-Gaussian part " + std::to_string(log_ig) + ", log skew-normal part " +
                              std::to_string(log_lesn) + ")");
  const double hi = std::max(log_ig, log_lesn);
  const double lo = std::min(log_ig, log_lesn);
  if (lo == kNegInf) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

double meigd_log_fractional_moment(const MeigdParams& p, double r) {
  p.validate();
  return meigd_combine_log_moments(meigd_log_ig_moment(p, r), meigd_log_lesn_moment(p, r), r);
}

double meigd_fractional_moment(const MeigdParams& p, double r) { return std::exp(meigd_log_fractional_moment(p, r)); }

namespace {

// Maximize a concave function starting from s; returns the argmax.
double maximize_concave(const std::function<double(double)>& g, double s, double scale) {
  double step = scale;
  double x = s;
  double gx = g(x);
  // Bracket by expanding steps uphill.
  double dir = g(x + 1e-3 * scale) >= gx ? 1.0 : -1.0;
  double lo = x, hi = x;
  for (int it = 0; it < 200; ++it) {
    const double xn = x + dir * step;
    const double gn = g(xn);
    if (!(gn > gx)) {
      lo = std::min(x - step, xn);
      hi = std::max(x + step, xn);
      break;
    }
    x = xn;
    gx = gn;
    step *= 1.6;
    lo = hi = x;
  }
  if (lo == hi) return x;
  // Golden section.
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 120 && (b - a) > 1e-10 * (1.0 + std::abs(a)); ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  return 0.5 * (a + b);
}

// Walk from the mode until g drops `drop` below its peak.
double walk_out(const std::function<double(double)>& g, double mode, double g_peak, double dir, double scale,
                double drop) {
  double step = scale;
  double x = mode + dir * step;
  for (int it = 0; it < 400 && g(x) > g_peak - drop; ++it) {
    step *= 1.3;
    x = mode + dir * step;
  }
  return x;
}

constexpr double kTailDrop = 48.0;  // e^-48 ~ 1.4e-21
constexpr std::size_t kComponentPanels = 32;

}  // namespace

MeigdCdf::MeigdCdf(const MeigdParams& p, std::size_t panels) : p_(p) {
  p.validate();
  if (panels < 1) throw std::invalid_argument("MeigdCdf: need at least one panel");
  // Support of each component in u = ln x, walked out until the log density
  // has dropped kTailDrop below its peak. A component can be far narrower than
  // the whole support, so each gets its own panel grid as well.
  std::vector<std::pair<double, double>> parts;
  if (p.w > 0.0) {
    const double phi = p.b / p.a;
    // Inverse Gaussian part in v = ln(y/a): g(v) = -v/2 - phi (cosh v - 1), concave.
    auto g = [phi](double v) { return -0.5 * v - phi * (std::cosh(v) - 1.0); };
    const double mode = -std::asinh(0.5 / phi);
    const double width = 1.0 / std::sqrt(phi * std::cosh(mode));
    const double gp = g(mode);
    const double vlo = walk_out(g, mode, gp, -1.0, width, kTailDrop);
    const double vhi = walk_out(g, mode, gp, 1.0, width, kTailDrop);
    const double la = std::log(p.a);
    parts.emplace_back((vlo + la) / p.eta, (vhi + la) / p.eta);
  }
  if (p.w < 1.0) {
    const double s = std::sqrt(1.0 + p.theta * p.theta);
    auto g = [&](double z) { return -0.5 * z * z + log_normal_cdf(p.tau * s + p.theta * z); };
    const double mode = maximize_concave(g, 0.0, 0.5);
    const double gp = g(mode);
    const double zlo = walk_out(g, mode, gp, -1.0, 0.25, kTailDrop);
    const double zhi = walk_out(g, mode, gp, 1.0, 0.25, kTailDrop);
    parts.emplace_back(p.c + p.d * zlo, p.c + p.d * zhi);
  }
  u_lo_ = std::numeric_limits<double>::infinity();
  u_hi_ = -u_lo_;
  for (const auto& [lo, hi] : parts) {
    u_lo_ = std::min(u_lo_, lo);
    u_hi_ = std::max(u_hi_, hi);
  }
  for (std::size_t k = 0; k <= panels; ++k)
    knots_.push_back(u_lo_ + (u_hi_ - u_lo_) * static_cast<double>(k) / static_cast<double>(panels));
  for (const auto& [lo, hi] : parts)
    for (std::size_t k = 0; k <= kComponentPanels; ++k)
      knots_.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(kComponentPanels));
  std::sort(knots_.begin(), knots_.end());
  knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());

  cumulative_.assign(knots_.size(), 0.0);
  for (std::size_t k = 0; k + 1 < knots_.size(); ++k) cumulative_[k + 1] = cumulative_[k] + partial(k, knots_[k + 1]);
}

double MeigdCdf::partial(std::size_t panel, double u) const {
  QuadratureOptions opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-12;
  auto h = [this](double t) { return meigd_log_space_density(p_, t); };
  return integrate_gk15(h, knots_[panel], u, opts).value;
}

double MeigdCdf::entropy() const {
  QuadratureOptions opts;
  opts.abs_tol = 1e-12;
  opts.rel_tol = 1e-8;
  // f_X(x) = f_U(ln x) / x, so h(X) = h(U) + E[U] with U = ln X.
  auto h = [this](double t) {
    const double f = meigd_log_space_density(p_, t);
    return f > 0.0 ? f * (t - std::log(f)) : 0.0;
  };
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < knots_.size(); ++k) sum += integrate_gk15(h, knots_[k], knots_[k + 1], opts).value;
  return sum;
}

double MeigdCdf::operator()(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return std::min(1.0, cumulative_.back());
  const double u = std::log(x);
  if (u <= u_lo_) return 0.0;
  if (u >= u_hi_) return std::min(1.0, cumulative_.back());
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - knots_.begin()) - 1));
  return std::clamp(cumulative_[k] + partial(k, u), 0.0, 1.0);
}

double MeigdCdf::quantile(double prob) const {
  if (!(prob > 0.0 && prob < 1.0)) throw std::domain_error("MeigdCdf::quantile: probability must lie in (0,1)");
  double lo = u_lo_, hi = u_hi_;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(std::exp(mid)) < prob) lo = mid;
    else hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

double meigd_cdf(const MeigdParams& p, double x) { return MeigdCdf(p)(x); }

}  // namespace fracpce
