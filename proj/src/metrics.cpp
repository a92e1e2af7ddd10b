#include "fracpce/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracpce/special.hpp"

namespace fracpce {

ReferenceCdf ReferenceCdf::normal(double mean, double std) {
  if (!(std > 0.0) || !std::isfinite(mean)) throw std::invalid_argument("ReferenceCdf: invalid normal parameters");
  ReferenceCdf r;
  r.kind_ = Kind::analytic_normal;
  r.mean_ = mean;
  r.std_ = std;
  return r;
}

ReferenceCdf ReferenceCdf::empirical(std::vector<double> samples, std::size_t min_size) {
  if (samples.size() < min_size) throw std::invalid_argument("ReferenceCdf: empirical reference needs more samples");
  for (double v : samples)
    if (!std::isfinite(v)) throw std::invalid_argument("ReferenceCdf: non-finite sample");
  std::sort(samples.begin(), samples.end());
  if (!(samples.back() > samples.front()))
    throw std::domain_error("ReferenceCdf: degenerate (point-mass) reference distribution");
  ReferenceCdf r;
  r.kind_ = Kind::empirical;
  const double n = static_cast<double>(samples.size());
  double s = 0.0, s2 = 0.0;
  for (double v : samples) s += v;
  r.mean_ = s / n;
  for (double v : samples) s2 += (v - r.mean_) * (v - r.mean_);
  r.std_ = std::sqrt(s2 / n);
  r.sorted_ = std::move(samples);
  return r;
}

double ReferenceCdf::operator()(double x) const {
  if (kind_ == Kind::analytic_normal) return normal_cdf((x - mean_) / std_);
  return empirical_cdf(sorted_, x);
}

double ReferenceCdf::quantile(double prob) const {
  if (kind_ == Kind::analytic_normal) return mean_ + std_ * normal_quantile(prob);
  const auto n = sorted_.size();
  auto idx = static_cast<std::size_t>(std::floor(prob * static_cast<double>(n)));
  return sorted_[std::min(idx, n - 1)];
}

double empirical_cdf(std::span<const double> sorted_samples, double x) {
  if (sorted_samples.empty()) throw std::invalid_argument("empirical_cdf: empty sample");
  const auto it = std::upper_bound(sorted_samples.begin(), sorted_samples.end(), x);
  return static_cast<double>(it - sorted_samples.begin()) / static_cast<double>(sorted_samples.size());
}

double kl_pointwise(double f_ref, double f_approx) {
  if (f_ref <= 0.0) return f_approx;
  const double g = std::max(f_approx, 1e-300);
  const double v = f_ref * std::log(f_ref / g) + g - f_ref;
  return v > 0.0 ? v : 0.0;
}

std::vector<double> error_grid(const ReferenceCdf& ref, const GridConfig& cfg) {
  if (cfg.points < 2) throw std::invalid_argument("error_grid: need at least two points");
  const double lo = ref.quantile(cfg.tail_prob);
  const double hi = ref.quantile(1.0 - cfg.tail_prob);
  const double span = hi - lo;
  if (!(span > 0.0)) throw std::domain_error("error_grid: reference has zero spread");
  const double a = lo - cfg.extension * span;
  const double b = hi + cfg.extension * span;
  std::vector<double> grid(cfg.points);
  const double h = (b - a) / static_cast<double>(cfg.points - 1);
  for (std::size_t k = 0; k < cfg.points; ++k) grid[k] = a + h * static_cast<double>(k);
  grid.back() = b;
  return grid;
}

ErrorProfile error_profile(const ReferenceCdf& ref, const std::function<double(double)>& approx_cdf,
                           const GridConfig& cfg) {
  ErrorProfile prof;
  prof.grid = error_grid(ref, cfg);
  const std::size_t n = prof.grid.size();
  prof.reference.resize(n);
  prof.approx.resize(n);
  prof.divergence.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = prof.grid[k];
    const double f = ref(x);
    const double g = approx_cdf(x);
    if (!std::isfinite(g)) throw std::domain_error("total_error: approximate CDF returned a non-finite value");
    prof.reference[k] = f;
    prof.approx[k] = g;
    prof.divergence[k] = kl_pointwise(f, g);
  }
  double eps = 0.0;
  for (std::size_t k = 1; k < n; ++k)
    eps += 0.5 * (prof.divergence[k] + prof.divergence[k - 1]) * (prof.grid[k] - prof.grid[k - 1]);
  prof.epsilon = eps;
  return prof;
}

double total_error(const ReferenceCdf& ref, const std::function<double(double)>& approx_cdf, const GridConfig& cfg) {
  return error_profile(ref, approx_cdf, cfg).epsilon;
}

}  // namespace fracpce
