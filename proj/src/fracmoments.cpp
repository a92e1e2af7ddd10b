#include "fracpce/fracmoments.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fracpce/kernels.hpp"

namespace fracpce {

std::string_view to_string(MomentSource s) { return s == MomentSource::pce_holder ? "pce-holder" : "sample-estimate"; }

int holder_anchor(double r) { return static_cast<int>(std::floor(r + 0.5)); }

double holder_estimate(const AbsoluteMoments& abs, double r) {
  if (!(r >= 1.0 && r <= 4.0)) throw std::domain_error("holder_estimate: order must lie in [1,4]");
  const int s = holder_anchor(r);
  const double ms = abs.m[static_cast<std::size_t>(s - 1)];
  if (ms < 0.0 || !std::isfinite(ms))
    throw std::logic_error("holder_estimate: negative or non-finite absolute moment of order " + std::to_string(s));
  if (r == static_cast<double>(s)) return ms;
  return std::pow(ms, r / static_cast<double>(s));
}

double holder_estimate(const MomentSet& moments, double r) {
  AbsoluteMoments abs;
  for (int k = 0; k < 4; ++k) abs.m[k] = moments.raw[k];
  return holder_estimate(abs, r);
}

void validate_orders(std::span<const double> orders) {
  if (orders.empty()) throw std::invalid_argument("fractional orders: empty");
  for (std::size_t k = 0; k < orders.size(); ++k) {
    if (!std::isfinite(orders[k])) throw std::invalid_argument("fractional orders: non-finite");
    if (k > 0 && !(orders[k] > orders[k - 1])) throw std::invalid_argument("fractional orders: must be strictly increasing");
  }
}

FractionalMomentSet fractional_moments_from_pce(const PceModel& model, std::span<const double> orders,
                                                const FractionalOptions& opts) {
  validate_orders(orders);
  const MomentSet mom = moments_from_pce(model, opts.moments);

  FractionalMomentSet out;
  out.orders.assign(orders.begin(), orders.end());
  out.source = MomentSource::pce_holder;

  AbsoluteMoments abs;
  for (int k = 0; k < 4; ++k) abs.m[k] = mom.raw[k];

  // Positivity screen on the surrogate.
  const auto& k = kernels::active();
  if (opts.positivity_samples > 0) {
    const Matrix xi = sample_germ(model.germ, opts.positivity_samples, opts.seed);
    const Vector y = eval_pce(model, xi);
    const kernels::PowerSums s = k.power_sums(y.data(), static_cast<std::size_t>(y.size()));
    out.positivity.samples = s.count;
    out.positivity.prob_nonpositive = static_cast<double>(s.nonpositive) / static_cast<double>(s.count);
  }
  if (out.positivity.prob_nonpositive > opts.max_nonpositive_prob) {
    const Matrix xi = sample_germ(model.germ, opts.fallback_samples, opts.seed ^ 0xA5A5A5A5ULL);
    const Vector y = eval_pce(model, xi);
    const kernels::PowerSums s = k.power_sums(y.data(), static_cast<std::size_t>(y.size()));
    const double n = static_cast<double>(s.count);
    abs.m = {s.a1 / n, s.s2 / n, s.a3 / n, s.s4 / n};
    abs.from_raw = false;
    out.positivity.raw_used_as_absolute = false;
  }

  out.values.reserve(orders.size());
  for (double r : orders) out.values.push_back(holder_estimate(abs, r));
  return out;
}

FractionalMomentSet fractional_moments_from_samples(std::span<const double> y, std::span<const double> orders) {
  validate_orders(orders);
  if (y.empty()) throw std::invalid_argument("fractional_moments_from_samples: no samples");
  FractionalMomentSet out;
  out.orders.assign(orders.begin(), orders.end());
  out.source = MomentSource::sample_estimate;
  out.values.assign(orders.size(), 0.0);
  std::size_t nonpos = 0;
  for (double v : y) {
    if (v <= 0.0) ++nonpos;
    const double a = std::abs(v);
    for (std::size_t k = 0; k < orders.size(); ++k) out.values[k] += std::pow(a, orders[k]);
  }
  for (double& v : out.values) v /= static_cast<double>(y.size());
  out.positivity.samples = y.size();
  out.positivity.prob_nonpositive = static_cast<double>(nonpos) / static_cast<double>(y.size());
  out.positivity.raw_used_as_absolute = false;
  return out;
}

}  // namespace fracpce
