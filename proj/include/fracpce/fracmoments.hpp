#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fracpce/pce.hpp"

namespace fracpce {

enum class MomentSource { pce_holder, sample_estimate };

std::string_view to_string(MomentSource s);

/// The default fractional orders, clustered around the integer moments.
inline const std::vector<double>& default_orders() {
  static const std::vector<double> r = {1.1, 1.2, 1.8, 1.9, 2.1, 2.2, 2.9, 3.0};
  return r;
}

/// Absolute integer moments E|Y|^k, k = 1..4.
struct AbsoluteMoments {
  std::array<double, 4> m{};
  /// True when the raw moments were taken as absolute (Y positive).
  bool from_raw = true;
};

struct PositivityDiagnostics {
  std::size_t samples = 0;
  double prob_nonpositive = 0.0;
  bool raw_used_as_absolute = true;
};

struct FractionalMomentSet {
  std::vector<double> orders;
  std::vector<double> values;
  MomentSource source = MomentSource::pce_holder;
  PositivityDiagnostics positivity;
};

/// Nearest integer anchor for an order; halves round up.
int holder_anchor(double r);

/// (E|Y|^s)^(r/s) with s the nearest integer to r. Exact at integer r.
/// Orders outside [1,4] raise std::domain_error.
double holder_estimate(const AbsoluteMoments& abs, double r);

/// Convenience: raw moments of a MomentSet taken as absolute.
double holder_estimate(const MomentSet& moments, double r);

struct FractionalOptions {
  std::size_t positivity_samples = 100'000;
  double max_nonpositive_prob = 1e-4;
  std::size_t fallback_samples = 1'000'000;
  std::uint64_t seed = 0xF2AC7ULL;
  MomentOptions moments{};
};

/// Hoelder estimates from the analytic PCE moments. When the surrogate puts
/// more than max_nonpositive_prob mass at or below zero, the absolute integer
/// moments are estimated by evaluating the surrogate instead and flagged.
FractionalMomentSet fractional_moments_from_pce(const PceModel& model, std::span<const double> orders,
                                                const FractionalOptions& opts = {});

/// Plain sample averages of |Y|^r.
FractionalMomentSet fractional_moments_from_samples(std::span<const double> y, std::span<const double> orders);

/// Orders must be strictly increasing; throws std::invalid_argument otherwise.
void validate_orders(std::span<const double> orders);

}  // namespace fracpce
