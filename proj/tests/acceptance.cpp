// End-to-end acceptance checks. One PASS/FAIL line per criterion; exit 1 if any fails.
//   acceptance [--skip-studies] [--known-gap 7b,7c]
// A known gap still prints FAIL but is left out of the exit status.
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "fracpce/bessel.hpp"
#include "fracpce/config.hpp"
#include "fracpce/experiments.hpp"
#include "fracpce/fracmoments.hpp"
#include "fracpce/kernels.hpp"
#include "fracpce/meigd.hpp"
#include "fracpce/metrics.hpp"
#include "fracpce/pce.hpp"
#include "fracpce/polybasis.hpp"
#include "fracpce/rng.hpp"
#include "fracpce/special.hpp"
#include "oracle_meigd.hpp"

using namespace fracpce;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0, known_failures = 0;
std::vector<std::string> known_gaps;

void report(const char* id, const char* name, const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const bool known = std::find(known_gaps.begin(), known_gaps.end(), id) != known_gaps.end();
  if (!o.pass) ++(known ? known_failures : failures);
  std::printf("%s %-3s %-34s %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), seconds_since(t0),
              !o.pass && known ? " [known gap]" : "");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome exact_moments() {
  const auto t0 = Clock::now();
  const auto spec = default_model_spec(ModelKind::gaussian_sum);
  const auto model = make_model(spec);
  const GermSpec g = natural_germ(spec.inputs);
  auto ed = sample_inputs(spec.inputs, g, 50, 2024);
  ed.y.resize(ed.x.rows());
  std::vector<double> row(3);
  for (Eigen::Index i = 0; i < ed.x.rows(); ++i) {
    for (int j = 0; j < 3; ++j) row[static_cast<std::size_t>(j)] = ed.x(i, j);
    ed.y(i) = model->evaluate(row);
  }
  const auto m = moments_from_pce(fit_ols(ed, total_degree_set(3, 1), g));
  const double secs = seconds_since(t0);
  const double em = std::abs(m.mean / 50.0 - 1.0), ev = std::abs(m.variance / 12.0 - 1.0);
  const bool ok = em <= 1e-8 && ev <= 1e-8 && std::abs(m.skewness) <= 1e-6 && std::abs(m.kurtosis - 3.0) <= 1e-6 && secs < 1.0;
  return {ok, fmt("mean %.12g var %.12g skew %.2e kurt %.12g", m.mean, m.variance, m.skewness, m.kurtosis)};
}

Outcome moment_oracle() {
  const auto t0 = Clock::now();
  Rng rng(2);
  double worst = 0.0, worst_norm = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto p = oracle::random_params(rng);
    worst_norm = std::max(worst_norm, std::abs(oracle::moment(p, 0.0) - 1.0));
    for (double r : {0.5, 1.0, 1.7, 2.3, 3.0, 4.0})
      worst = std::max(worst, std::abs(meigd_fractional_moment(p, r) / oracle::moment(p, r) - 1.0));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && worst_norm <= 1e-6 && secs < 30.0,
          fmt("50 sets x 6 orders, worst rel %.2e, normalization %.2e", worst, worst_norm)};
}

Outcome holder_directions() {
  const auto t0 = Clock::now();
  Rng rng(3);
  int bad = 0, checked = 0;
  for (int pair = 0; pair < 20; ++pair) {
    const double mu = rng.uniform(-2.0, 3.0), sigma = rng.uniform(0.02, 0.8);
    AbsoluteMoments abs;
    for (int k = 1; k <= 4; ++k) abs.m[static_cast<std::size_t>(k - 1)] = std::exp(k * mu + 0.5 * k * k * sigma * sigma);
    for (int step = 0; step <= 60; ++step) {
      const double r = 1.0 + 0.05 * step;
      const double truth = std::exp(r * mu + 0.5 * r * r * sigma * sigma), est = holder_estimate(abs, r);
      const int s = holder_anchor(r);
      ++checked;
      if (std::abs(r - std::round(r)) < 1e-12) {
        bad += est != abs.m[static_cast<std::size_t>(std::lround(r) - 1)];
      } else if (r < s) {
        bad += !(est > truth);
      } else {
        bad += !(est < truth);
      }
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 1.0, fmt("%d of %d (pair, order) cases wrong", bad, checked)};
}

double bessel_integral(double nu, double x) {
  double t_max = 1.0;
  while (-x * (std::cosh(t_max) - 1.0) + std::abs(nu) * t_max > -60.0) t_max *= 1.5;
  auto f = [&](double t) { return std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(nu * t); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, t_max, 15, 1e-13) * std::exp(-x);
}

Outcome bessel() {
  double worst_closed = 0.0, worst_int = 0.0;
  for (double lx = std::log(1e-3); lx <= std::log(100.0) + 1e-9; lx += 0.02) {
    const double x = std::exp(lx);
    const double base = std::sqrt(kPi / (2.0 * x)) * std::exp(-x);
    const double closed[4] = {base, base * (1 + 1 / x), base * (1 + 3 / x + 3 / (x * x)),
                              base * (1 + 6 / x + 15 / (x * x) + 15 / (x * x * x))};
    for (int k = 0; k < 4; ++k) worst_closed = std::max(worst_closed, std::abs(bessel_k(k + 0.5, x) / closed[k] - 1.0));
  }
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double nu = rng.uniform(-8.0, 8.0), x = std::exp(rng.uniform(std::log(1e-2), std::log(80.0)));
    worst_int = std::max(worst_int, std::abs(bessel_k(nu, x) / bessel_integral(nu, x) - 1.0));
  }
  return {worst_closed <= 1e-10 && worst_int <= 1e-9,
          fmt("half-integer worst %.2e, integral oracle worst %.2e", worst_closed, worst_int)};
}

Outcome loo_identity() {
  Rng rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dim = 1 + rng.below(3);
    const auto basis = total_degree_set(dim, static_cast<int>(dim == 1 ? 4 : dim == 2 ? 3 : 2));
    const GermSpec g = GermSpec::uniform(dim, trial % 2 ? Family::legendre : Family::hermite);
    const std::size_t n = basis.size() + 5 + rng.below(50 - basis.size() - 5);
    ExperimentalDesign ed;
    ed.xi = sample_germ(g, n, 100 + static_cast<std::uint64_t>(trial));
    ed.x = ed.xi;
    ed.y.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      ed.y(r) = std::exp(0.4 * ed.xi(r, 0)) + 0.2 * ed.xi.row(r).squaredNorm() + 0.05 * rng.normal();
    }
    const auto fit = fit_ols(ed, basis, g);
    double press = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      ExperimentalDesign rest;
      rest.xi.resize(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(dim));
      rest.y.resize(static_cast<Eigen::Index>(n - 1));
      for (std::size_t i = 0, j = 0; i < n; ++i) {
        if (i == k) continue;
        rest.xi.row(static_cast<Eigen::Index>(j)) = ed.xi.row(static_cast<Eigen::Index>(i));
        rest.y(static_cast<Eigen::Index>(j++)) = ed.y(static_cast<Eigen::Index>(i));
      }
      rest.x = rest.xi;
      const auto m = fit_ols(rest, basis, g);
      const Matrix one = ed.xi.row(static_cast<Eigen::Index>(k));
      const double e = ed.y(static_cast<Eigen::Index>(k)) - eval_pce(m, one)(0);
      press += e * e;
    }
    const double mean = ed.y.mean();
    const double q2 = 1.0 - press / (ed.y.array() - mean).square().sum();
    worst = std::max(worst, std::abs(q_squared_loo(fit, ed) - q2));
  }
  return {worst <= 1e-8, fmt("10 problems, worst |dQ2| %.2e", worst)};
}

Outcome round_trip() {
  const auto t0 = Clock::now();
  Rng rng(6);
  int ok = 0;
  for (int i = 0; i < 20; ++i) {
    const auto p = oracle::random_params(rng);
    FractionalMomentSet fm;
    fm.orders = default_orders();
    for (double r : fm.orders) fm.values.push_back(meigd_fractional_moment(p, r));
    FitConfig cfg;
    cfg.starts = 50;
    cfg.seed = 1000 + static_cast<std::uint64_t>(i);
    const auto fit = fit_meigd(fm, cfg);
    ok += fit.residual <= 1e-6;
  }
  const double secs = seconds_since(t0);
  return {ok >= 18 && secs < 300.0, fmt("%d/20 reach residual <= 1e-6", ok)};
}

struct StudyRun {
  ConvergenceResult result;
  double seconds = 0.0;
};

StudyRun run_study(const char* file) {
  const auto cfg = load_experiment_config(fs::path(FRACPCE_SOURCE_DIR) / "configs" / file);
  const auto t0 = Clock::now();
  StudyRun s{run_convergence_study(cfg), 0.0};
  s.seconds = seconds_since(t0);
  std::printf("     %s: %zu rows in %.0f s\n", file, s.result.rows.size(), s.seconds);
  for (const auto& a : s.result.aggregates)
    std::printf("       %-10s n_sim=%-4zu mean %.4e  std %.4e  failures %zu\n", std::string(to_string(a.method)).c_str(),
                a.n_sim, a.mean, a.std, a.failures);
  std::fflush(stdout);
  return s;
}

// Compares pce-holder against lhs on the listed grid points.
Outcome direction(const StudyRun& s, const std::vector<std::size_t>& mean_at, const std::vector<std::size_t>& std_at) {
  bool ok = s.seconds < 15 * 60;
  std::string d;
  for (std::size_t n : mean_at) {
    const auto &h = s.result.aggregate(Method::pce_holder, n), &l = s.result.aggregate(Method::lhs, n);
    const bool b = h.mean < l.mean;
    ok = ok && b;
    d += fmt("mean@%zu %s ", n, b ? "ok" : "X");
  }
  for (std::size_t n : std_at) {
    const auto &h = s.result.aggregate(Method::pce_holder, n), &l = s.result.aggregate(Method::lhs, n);
    const bool b = h.std < l.std;
    ok = ok && b;
    d += fmt("std@%zu %s ", n, b ? "ok" : "X");
  }
  d += fmt("wall %.0f s", s.seconds);
  return {ok, d};
}

Outcome cardinality() {
  int bad = 0;
  for (std::size_t m = 1; m <= 6; ++m)
    for (int p = 0; p <= 6; ++p) {
      const auto full = total_degree_set(m, p);
      double binom = 1.0;
      for (int k = 1; k <= p; ++k) binom = binom * static_cast<double>(m + static_cast<std::size_t>(k)) / k;
      // independent enumeration over the cube {0..p}^m
      std::size_t count = 0;
      std::vector<int> a(m, 0);
      for (;;) {
        int s = 0;
        for (int v : a) s += v;
        count += s <= p;
        std::size_t j = 0;
        while (j < m && ++a[j] > p) a[j++] = 0;
        if (j == m) break;
      }
      bad += full.size() != count || std::llround(binom) != static_cast<long long>(count);
      for (double q : {0.4, 0.7, 1.0}) {
        const auto h = hyperbolic_set(m, p, q);
        for (const auto& idx : h.indices) {
          bool found = false;
          for (const auto& f : full.indices) found = found || f == idx;
          bad += !found;
        }
        if (q == 1.0) bad += h.size() != full.size();
      }
    }
  return {bad == 0, fmt("M<=6, p<=6: %d mismatches", bad)};
}

Outcome metric_sanity() {
  const auto ref = ReferenceCdf::normal(0.0, 1.0);
  const double self = total_error(ref, [&](double x) { return ref(x); });
  GridConfig fine;
  fine.points = 4096;
  double worst = 0.0;
  for (double shift : {0.3, 0.1, 0.03}) {
    auto g = [shift](double x) { return normal_cdf(x - shift); };
    worst = std::max(worst, std::abs(total_error(ref, g, fine) / total_error(ref, g) - 1.0));
  }
  return {self == 0.0 && worst < 5e-3, fmt("self %.1e, grid refinement change %.2e", self, worst)};
}

}  // namespace

int main(int argc, char** argv) {
  bool skip_studies = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--skip-studies") == 0) {
      skip_studies = true;
    } else if (std::strcmp(argv[i], "--known-gap") == 0 && i + 1 < argc) {
      std::string list = argv[++i];
      for (std::size_t at = 0; at <= list.size();) {
        const std::size_t comma = std::min(list.find(',', at), list.size());
        if (comma > at) known_gaps.push_back(list.substr(at, comma - at));
        at = comma + 1;
      }
    } else {
      std::fprintf(stderr, "usage: acceptance [--skip-studies] [--known-gap ID[,ID...]]\n");
      return 2;
    }
  }
  std::printf("kernels: %s\n", std::string(kernels::to_string(kernels::active_isa())).c_str());
  report("1", "exact moment recovery", exact_moments);
  report("2", "fractional moment vs quadrature", moment_oracle);
  report("3", "Hoelder bound directions", holder_directions);
  report("4", "Bessel K validation", bessel);
  report("5", "LOO identity", loo_identity);
  report("6", "fit round trip", round_trip);
  if (!skip_studies) {
    const StudyRun gs = run_study("gaussian_sum.json");
    report("7a", "gaussian-sum convergence", [&] { return direction(gs, {50, 100, 200}, {50, 100, 200}); });
    const StudyRun plate = run_study("plate.json");
    report("7b", "plate convergence", [&] { return direction(plate, {20, 50, 100, 200}, {20, 50, 100, 200}); });
    const StudyRun car = run_study("quarter_car.json");
    report("7c", "quarter-car convergence", [&] { return direction(car, {100, 200}, {}); });
    report("8", "pce-lhs matches lhs", [&] {
      const auto &a = gs.result.aggregate(Method::pce_lhs, 200), &b = gs.result.aggregate(Method::lhs, 200);
      const double se = std::sqrt(a.std * a.std / a.count + b.std * b.std / b.count);
      return Outcome{std::abs(a.mean - b.mean) < se, fmt("|%.4e - %.4e| vs pooled SE %.4e", a.mean, b.mean, se)};
    });
  }
  report("9", "basis cardinality", cardinality);
  report("10", "metric sanity", metric_sanity);
  std::printf("%d criterion line(s) failed, %d more failed as known gaps\n", failures, known_failures);
  return failures == 0 ? 0 : 1;
}
