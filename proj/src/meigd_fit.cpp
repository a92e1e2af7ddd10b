#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "fracpce/meigd.hpp"
#include "fracpce/rng.hpp"

namespace fracpce {

namespace {

constexpr int kParams = 8;
using Coords = Eigen::Matrix<double, kParams, 1>;

double logistic(double s) { return 1.0 / (1.0 + std::exp(-s)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

struct Interval {
  double lo, hi;
  double from_unit(double z) const { return lo + (hi - lo) * logistic(z); }
  double to_unit(double v) const { return logit(std::clamp((v - lo) / (hi - lo), 1e-9, 1.0 - 1e-9)); }
};

// Every coordinate maps to its box through a logistic:
//   z0 -> w, z1 -> eta, z2 -> ln a - eta ln s, z3 -> ln(b/a), z4 -> c - ln s,
//   z5 -> ln d, z6 -> theta, z7 -> tau,
// with s the target's scale. The lower bound on each component's log-space
// width is a fraction of the target's own log-space spread; without it the
// least-squares optimum for Hoelder targets (exact for a point mass) drifts
// to near-degenerate spikes.
struct Transform {
  double eta_min, eta_max;
  double log_scale;
  double min_width;  // smallest component standard deviation in ln x
  static constexpr Interval kW{1e-6, 1.0 - 1e-6};
  static constexpr Interval kLogA{-12.0, 12.0};
  static constexpr Interval kLoc{-6.0, 6.0};
  static constexpr Interval kShape{-10.0, 10.0};
  static constexpr double kLogPhiMin = -12.0;
  static constexpr double kLogDMax = 1.6;  // d <= ~5

  // The inverse Gaussian part has sd ~ 1 / (eta sqrt(phi)) in ln x for large phi.
  Interval log_phi(double eta) const {
    return {kLogPhiMin, std::max(kLogPhiMin + 1.0, -2.0 * std::log(eta * min_width))};
  }
  Interval log_d() const { return {std::log(min_width), std::max(std::log(min_width) + 1.0, kLogDMax)}; }

  MeigdParams to_params(const Coords& z) const {
    MeigdParams p;
    p.w = kW.from_unit(z(0));
    p.eta = Interval{eta_min, eta_max}.from_unit(z(1));
    const double log_a = kLogA.from_unit(z(2)) + p.eta * log_scale;
    p.a = std::exp(log_a);
    p.b = std::exp(log_a + log_phi(p.eta).from_unit(z(3)));
    p.c = log_scale + kLoc.from_unit(z(4));
    p.d = std::exp(log_d().from_unit(z(5)));
    p.theta = kShape.from_unit(z(6));
    p.tau = kShape.from_unit(z(7));
    return p;
  }

  Coords to_coords(const MeigdParams& p) const {
    Coords z;
    z(0) = kW.to_unit(p.w);
    z(1) = Interval{eta_min, eta_max}.to_unit(p.eta);
    z(2) = kLogA.to_unit(std::log(p.a) - p.eta * log_scale);
    z(3) = log_phi(p.eta).to_unit(std::log(p.b / p.a));
    z(4) = kLoc.to_unit(p.c - log_scale);
    z(5) = log_d().to_unit(std::log(p.d));
    z(6) = kShape.to_unit(p.theta);
    z(7) = kShape.to_unit(p.tau);
    return z;
  }
};

// Spread of ln X implied by the targets: least-squares fit of
// ln t(r) = alpha r + beta r^2 (exact for a lognormal, sd^2 = 2 beta).
double target_log_spread(std::span<const double> orders, std::span<const double> targets) {
  double s22 = 0, s23 = 0, s24 = 0, s1y = 0, s2y = 0;
  for (std::size_t k = 0; k < orders.size(); ++k) {
    const double r = orders[k], y = std::log(targets[k]);
    s22 += r * r;
    s23 += r * r * r;
    s24 += r * r * r * r;
    s1y += r * y;
    s2y += r * r * y;
  }
  const double det = s22 * s24 - s23 * s23;
  if (orders.size() < 2 || !(std::abs(det) > 1e-12 * s22 * s24)) return 0.0;
  const double beta = (s22 * s2y - s23 * s1y) / det;
  return beta > 0.0 ? std::sqrt(2.0 * beta) : 0.0;
}

// Residual vector; returns false when any moment is not finite. `ig_rest`
// holds the inverse Gaussian log-moments without the log(w) term; they depend
// on (eta, a, b) only, so Jacobian columns of the other parameters reuse them.
bool residuals(const MeigdParams& p, std::span<const double> orders, std::span<const double> targets,
               Eigen::VectorXd& out, std::vector<double>& ig_rest, bool reuse_ig) {
  if (!p.valid()) return false;
  out.resize(static_cast<Eigen::Index>(orders.size()));
  if (!reuse_ig) ig_rest.resize(orders.size());
  MeigdParams unit = p;
  unit.w = 1.0;
  const double log_w = std::log(p.w);
  for (std::size_t k = 0; k < orders.size(); ++k) {
    double m;
    try {
      if (!reuse_ig) ig_rest[k] = meigd_log_ig_moment(unit, orders[k]);
      m = std::exp(meigd_combine_log_moments(ig_rest[k] + log_w, meigd_log_lesn_moment(p, orders[k]), orders[k]));
    } catch (const std::exception&) {
      return false;
    }
    if (!std::isfinite(m)) return false;
    out(static_cast<Eigen::Index>(k)) = m / targets[k] - 1.0;
  }
  return true;
}

// Coordinates 1..3 (eta, ln a, ln b) are the only ones the inverse Gaussian term sees.
constexpr bool touches_ig(int j) { return j >= 1 && j <= 3; }

struct StartOutcome {
  Coords z;
  double residual = std::numeric_limits<double>::infinity();
};

StartOutcome levenberg_marquardt(const Transform& tr, Coords z, std::span<const double> orders,
                                 std::span<const double> targets, const FitConfig& cfg) {
  StartOutcome out;
  Eigen::VectorXd r;
  std::vector<double> ig, ig_tmp;
  if (!residuals(tr.to_params(z), orders, targets, r, ig, false)) return out;
  double cost = r.squaredNorm();
  const Eigen::Index m = r.size();
  Eigen::MatrixXd jac(m, kParams);
  Eigen::VectorXd r_try;
  double mu = -1.0;
  double nu = 2.0;
  const double target_cost = 1e-2 * cfg.tolerance;
  std::size_t stall = 0;

  for (std::size_t it = 0; it < cfg.max_iterations && cost > target_cost; ++it) {
    // Central-difference Jacobian in the unconstrained coordinates; falls back
    // to a one-sided difference when one side leaves the finite region.
    bool jac_ok = true;
    for (int j = 0; j < kParams && jac_ok; ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(z(j)));
      Coords zp = z, zm = z;
      zp(j) += h;
      zm(j) -= h;
      Eigen::VectorXd rp, rm;
      const bool reuse = !touches_ig(j);
      if (reuse) ig_tmp = ig;
      const bool okp = residuals(tr.to_params(zp), orders, targets, rp, ig_tmp, reuse);
      const bool okm = residuals(tr.to_params(zm), orders, targets, rm, ig_tmp, reuse);
      if (okp && okm)
        jac.col(j) = (rp - rm) / (2.0 * h);
      else if (okp)
        jac.col(j) = (rp - r) / h;
      else if (okm)
        jac.col(j) = (r - rm) / h;
      else
        jac_ok = false;
    }
    if (!jac_ok) break;

    // Marquardt scaling from the column norms; steps come from a QR solve of the
    // augmented system [J; sqrt(mu) D] s = [-r; 0], which avoids squaring the
    // conditioning of J the way the normal equations would.
    const Coords grad = jac.transpose() * r;
    Coords scale = jac.colwise().squaredNorm().transpose();
    scale = scale.cwiseMax(1e-12 * std::max(1.0, scale.maxCoeff()));
    if (mu < 0.0) mu = 1e-3;
    bool accepted = false;
    Eigen::MatrixXd aug(m + kParams, kParams);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + kParams);
    rhs.head(m) = -r;
    aug.topRows(m) = jac;
    for (int inner = 0; inner < 30 && !accepted; ++inner) {
      aug.bottomRows(kParams).setZero();
      aug.bottomRows(kParams).diagonal() = (mu * scale).cwiseSqrt();
      const Coords step = aug.householderQr().solve(rhs);
      if (!step.allFinite()) {
        mu *= nu;
        nu *= 2.0;
        continue;
      }
      const Coords z_try = z + step;
      std::vector<double> ig_try;
      if (residuals(tr.to_params(z_try), orders, targets, r_try, ig_try, false)) {
        const double cost_try = r_try.squaredNorm();
        const double predicted = step.dot(mu * scale.cwiseProduct(step) - grad);
        const double rho = predicted > 0.0 ? (cost - cost_try) / predicted : -1.0;
        if (cost_try < cost && rho > 0.0) {
          const double rel = (cost - cost_try) / cost;
          stall = rel < 1e-6 ? stall + 1 : 0;
          z = z_try;
          r = r_try;
          ig = std::move(ig_try);
          cost = cost_try;
          mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
          nu = 2.0;
          accepted = true;
          break;
        }
      }
      mu *= nu;
      nu *= 2.0;
    }
  }
  out.z = z;
  out.residual = cost;
  return out;
}

}  // namespace

std::vector<double> meigd_moment_residuals(const MeigdParams& p, std::span<const double> orders,
                                           std::span<const double> targets) {
  if (orders.size() != targets.size()) throw std::invalid_argument("meigd_moment_residuals: size mismatch");
  std::vector<double> out(orders.size());
  for (std::size_t k = 0; k < orders.size(); ++k) out[k] = meigd_fractional_moment(p, orders[k]) / targets[k] - 1.0;
  return out;
}

FitResult fit_meigd(const FractionalMomentSet& target, const FitConfig& config) {
  validate_orders(target.orders);
  if (target.values.size() != target.orders.size()) throw std::invalid_argument("fit_meigd: orders/values size mismatch");
  for (double v : target.values)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("fit_meigd: target moments must be positive and finite");
  if (config.starts == 0) throw std::invalid_argument("fit_meigd: need at least one start");

  // Scale of the target: the Lyapunov norm at the lowest order.
  const double scale = std::pow(target.values.front(), 1.0 / target.orders.front());
  const double log_scale = std::log(scale);
  const double spread = target_log_spread(target.orders, target.values);
  const Transform tr{config.eta_min, config.eta_max, log_scale,
                     std::clamp(config.min_width_fraction * spread, 1e-8, 0.05)};

  FitResult best;
  best.seed = config.seed;
  best.residual = std::numeric_limits<double>::infinity();
  std::size_t converged = 0;
  std::size_t used = 0;
  struct Candidate {
    std::size_t start;
    double residual;
    MeigdParams params;
  };
  std::vector<Candidate> outcomes;

  for (std::size_t s = 0; s < config.starts; ++s) {
    Rng rng(derive_seed(config.seed, {s}));
    MeigdParams init;
    init.w = rng.uniform(0.05, 0.95);
    init.eta = rng.uniform(0.5, 5.0);
    // The inverse Gaussian part lives in y = x^eta, so a and b carry scale^eta.
    init.a = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)) + init.eta * log_scale);
    init.b = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)) + init.eta * log_scale);
    init.c = log_scale;
    init.d = rng.uniform(0.05, 1.0);
    init.theta = rng.uniform(-3.0, 3.0);
    init.tau = rng.uniform(-3.0, 3.0);

    const StartOutcome o = levenberg_marquardt(tr, tr.to_coords(init), target.orders, target.values, config);
    ++used;
    if (std::isfinite(o.residual)) {
      if (o.residual <= config.tolerance) ++converged;
      outcomes.push_back({s, o.residual, tr.to_params(o.z)});
    }
    if (config.stop_after_converged > 0 && converged >= config.stop_after_converged) break;
  }

  // Selection. Targets built from Hoelder estimates are not the moments of any
  // smooth law, and near-point-mass mixtures often match them slightly better
  // than the true distribution; and a handful of moments never pins down the
  // law, so converged starts can still disagree badly in the tails. All
  // converged starts (or, if none converged, those within one tolerance of the
  // best) count as ties and the fit with the largest entropy wins.
  // Remaining ties go to the lower start index.
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& c : outcomes) lowest = std::min(lowest, c.residual);
  const bool tie_break = config.prefer_spread;
  const double band = !tie_break ? lowest : lowest <= config.tolerance ? config.tolerance : lowest + config.tolerance;
  double best_entropy = -std::numeric_limits<double>::infinity();
  for (const auto& c : outcomes) {
    if (c.residual > band) continue;
    double h = -std::numeric_limits<double>::infinity();
    if (tie_break) {
      try {
        h = MeigdCdf(c.params).entropy();
      } catch (const std::exception&) {
      }
      if (!std::isfinite(h)) h = -std::numeric_limits<double>::infinity();
    } else {
      h = -c.residual;
    }
    if (h > best_entropy || !std::isfinite(best.residual)) {
      best_entropy = h;
      best.residual = c.residual;
      best.params = c.params;
      best.best_start = c.start;
    }
  }
  best.starts_used = used;
  best.converged_starts = converged;
  best.converged = best.residual <= config.tolerance;
  if (!std::isfinite(best.residual)) throw FitError("fit_meigd: every start produced a non-finite objective", best);
  return best;
}

}  // namespace fracpce
