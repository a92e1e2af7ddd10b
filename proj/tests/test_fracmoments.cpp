#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fracpce/fracmoments.hpp"
#include "fracpce/rng.hpp"

using namespace fracpce;

namespace {

double normal_abs_moment(double mu, double sd, double r) {
  const boost::math::normal n(mu, sd);
  auto f = [&](double y) { return std::pow(std::abs(y), r) * boost::math::pdf(n, y); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, mu - 12 * sd, mu + 12 * sd, 20, 1e-14);
}

AbsoluteMoments lognormal_moments(double mu, double sigma) {
  AbsoluteMoments a;
  for (int k = 1; k <= 4; ++k) a.m[static_cast<std::size_t>(k - 1)] = std::exp(k * mu + 0.5 * k * k * sigma * sigma);
  return a;
}

PceModel gaussian_sum_pce() {
  PceModel m;
  m.germ = GermSpec::uniform(3, Family::hermite);
  m.basis = total_degree_set(3, 1);
  m.beta = Vector(4);
  m.beta << 50.0, 2.0, 2.0, 2.0;
  return m;
}

}  // namespace

TEST_CASE("anchor is the nearest integer, halves round up") {
  CHECK(holder_anchor(1.1) == 1);
  CHECK(holder_anchor(1.9) == 2);
  CHECK(holder_anchor(2.5) == 3);
  CHECK(holder_anchor(3.49) == 3);
  CHECK(holder_anchor(4.0) == 4);
}

TEST_CASE("normal(50, 12) examples") {
  MomentSet m = moments_from_central(50.0, 12.0, 0.0, 3 * 144.0);
  CHECK(holder_estimate(m, 2.0) == 2512.0);
  const double e19 = holder_estimate(m, 1.9);
  CHECK(e19 == doctest::Approx(std::pow(2512.0, 0.95)).epsilon(1e-14));
  CHECK(e19 == doctest::Approx(1698.3166).epsilon(1e-7));
  const double true19 = normal_abs_moment(50, std::sqrt(12.0), 1.9);
  CHECK(true19 == doctest::Approx(1697.5475218).epsilon(1e-9));  // scipy quad, rel 1e-13
  CHECK(e19 > true19);
  const double e21 = holder_estimate(m, 2.1);
  CHECK(e21 == doctest::Approx(3715.5286703).epsilon(1e-9));
  CHECK(normal_abs_moment(50, std::sqrt(12.0), 2.1) == doctest::Approx(3717.3874490).epsilon(1e-9));
  CHECK(e21 < normal_abs_moment(50, std::sqrt(12.0), 2.1));
}

TEST_CASE("integer orders pass the moment through bit for bit") {
  const MomentSet m = moments_from_central(3.3, 1.7, 0.4, 9.1);
  for (int k = 1; k <= 4; ++k) CHECK(holder_estimate(m, k) == m.raw[k - 1]);
}

TEST_CASE("bound directions against lognormal moments") {
  Rng rng(17);
  for (int pair = 0; pair < 20; ++pair) {
    const double mu = rng.uniform(-2.0, 3.0), sigma = rng.uniform(0.02, 0.8);
    const auto abs = lognormal_moments(mu, sigma);
    for (double r = 1.0; r <= 4.0 + 1e-12; r += 0.05) {
      const double truth = std::exp(r * mu + 0.5 * r * r * sigma * sigma);
      const double est = holder_estimate(abs, r);
      const int s = holder_anchor(r);
      if (std::abs(r - s) < 1e-12) continue;
      if (r < s) CHECK(est >= truth);
      else CHECK(est <= truth);
    }
    for (int k = 1; k <= 4; ++k) CHECK(holder_estimate(abs, k) == abs.m[static_cast<std::size_t>(k - 1)]);
  }
}

TEST_CASE("order range and bad moments") {
  const MomentSet m = moments_from_central(1.0, 1.0, 0.0, 3.0);
  CHECK_THROWS_AS(holder_estimate(m, 0.99), std::domain_error);
  CHECK_THROWS_AS(holder_estimate(m, 4.01), std::domain_error);
  AbsoluteMoments bad;
  bad.m = {1.0, -1.0, 1.0, 1.0};
  CHECK_THROWS_AS(holder_estimate(bad, 1.8), std::logic_error);
}

TEST_CASE("from a PCE") {
  const auto pce = gaussian_sum_pce();
  const auto fm = fractional_moments_from_pce(pce, default_orders());
  CHECK(fm.source == MomentSource::pce_holder);
  CHECK(fm.positivity.raw_used_as_absolute);
  CHECK(fm.values.back() == doctest::Approx(126800.0).epsilon(1e-12));
  // per-pair consistency with the anchors
  const auto mom = moments_from_pce(pce);
  for (std::size_t k = 0; k < fm.orders.size(); ++k) {
    const double r = fm.orders[k];
    const int s = holder_anchor(r);
    CHECK(std::pow(fm.values[k], 1.0 / r) == doctest::Approx(std::pow(mom.raw[s - 1], 1.0 / s)).epsilon(1e-13));
  }
  const std::vector<double> two = {2.0};
  CHECK(fractional_moments_from_pce(pce, two).values[0] == doctest::Approx(12.0 + 2500.0).epsilon(1e-14));

  PceModel c;
  c.germ = GermSpec::uniform(1, Family::legendre);
  c.basis = total_degree_set(1, 0);
  c.beta = Vector::Constant(1, 3.0);
  const auto fc = fractional_moments_from_pce(c, default_orders());
  for (std::size_t k = 0; k < fc.orders.size(); ++k)
    CHECK(fc.values[k] == doctest::Approx(std::pow(3.0, fc.orders[k])).epsilon(1e-13));
}

TEST_CASE("responses that reach zero use sampled absolute moments") {
  PceModel m;  // Y = xi, half of it negative
  m.germ = GermSpec::uniform(1, Family::hermite);
  m.basis = total_degree_set(1, 1);
  m.beta = Vector(2);
  m.beta << 0.0, 1.0;
  FractionalOptions opts;
  opts.positivity_samples = 20000;
  opts.fallback_samples = 400000;
  const std::vector<double> orders = {1.0, 2.0, 3.0};
  const auto fm = fractional_moments_from_pce(m, orders, opts);
  CHECK(!fm.positivity.raw_used_as_absolute);
  CHECK(fm.positivity.prob_nonpositive == doctest::Approx(0.5).epsilon(0.02));
  CHECK(fm.values[0] == doctest::Approx(std::sqrt(2.0 / 3.141592653589793)).epsilon(5e-3));
  CHECK(fm.values[1] == doctest::Approx(1.0).epsilon(5e-3));
  CHECK(fm.values[2] == doctest::Approx(2.0 * std::sqrt(2.0 / 3.141592653589793)).epsilon(1e-2));
}

TEST_CASE("sample estimates") {
  const std::vector<double> ones = {1, 1, 1}, two = {2};
  const std::vector<double> r25 = {2.5}, r2 = {2.0};
  CHECK(fractional_moments_from_samples(ones, r25).values[0] == 1.0);
  CHECK(fractional_moments_from_samples(two, r2).values[0] == 4.0);
  CHECK(fractional_moments_from_samples(two, r2).source == MomentSource::sample_estimate);
  CHECK_THROWS(fractional_moments_from_samples(std::vector<double>{}, r2));

  Rng rng(55);
  std::vector<double> y(1'000'000);
  for (auto& v : y) v = 50.0 + std::sqrt(12.0) * rng.normal();
  const auto fm = fractional_moments_from_samples(y, default_orders());
  const std::vector<double> r19 = {1.9};
  CHECK(fractional_moments_from_samples(y, r19).values[0] == doctest::Approx(1697.5475).epsilon(1e-3));
  // Lyapunov: value^(1/r) nondecreasing
  for (std::size_t k = 1; k < fm.orders.size(); ++k)
    CHECK(std::pow(fm.values[k], 1.0 / fm.orders[k]) >= std::pow(fm.values[k - 1], 1.0 / fm.orders[k - 1]));
}

TEST_CASE("order validation") {
  CHECK_NOTHROW(validate_orders(default_orders()));
  CHECK_THROWS(validate_orders(std::vector<double>{}));
  CHECK_THROWS(validate_orders(std::vector<double>{1.2, 1.1}));
  CHECK_THROWS(validate_orders(std::vector<double>{1.2, 1.2}));
}
