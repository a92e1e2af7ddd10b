#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "fracpce/models.hpp"
#include "fracpce/special.hpp"

namespace fracpce {

namespace {

constexpr double kBlowup = 1e6;

void check_inputs(double c_s, double k_s, double k_t) {
  if (!(c_s >= 0.0) || !(k_s > 0.0) || !(k_t > 0.0) || !std::isfinite(c_s) || !std::isfinite(k_s) || !std::isfinite(k_t))
    throw std::domain_error("quarter-car: damping must be >= 0 and stiffnesses > 0");
}

}  // namespace

QuarterCarModel::QuarterCarModel(const QuarterCarConfig& cfg) : cfg_(cfg) {
  if (!(cfg.m_s > 0.0) || !(cfg.m_us > 0.0)) throw std::invalid_argument("quarter-car: masses must be positive");
  if (!(cfg.dt > 0.0) || !(cfg.duration > cfg.dt)) throw std::invalid_argument("quarter-car: invalid time grid");
  if (!(cfg.x_c > 0.0)) throw std::invalid_argument("quarter-car: stroke threshold must be positive");
  if (!(cfg.speed > 0.0) || !(cfg.bump_length > 0.0)) throw std::invalid_argument("quarter-car: invalid road profile");
  if (cfg.c_t < 0.0) throw std::invalid_argument("quarter-car: tyre damping must be >= 0");
}

Eigen::Matrix4d QuarterCarModel::system_matrix(double c_s, double k_s, double k_t, const QuarterCarConfig& cfg) {
  Eigen::Matrix4d a;
  const double mus = cfg.m_us, ms = cfg.m_s;
  a << 0.0, 1.0, 0.0, 0.0,                                                            //
      -4.0 * k_t / mus, -4.0 * (c_s + cfg.c_t) / mus, 4.0 * k_s / mus, 4.0 * c_s / mus,  //
      0.0, -1.0, 0.0, 1.0,                                                            //
      0.0, 4.0 * c_s / ms, -4.0 * k_s / ms, -4.0 * c_s / ms;
  return a;
}

Eigen::Vector4d QuarterCarModel::input_vector(const QuarterCarConfig& cfg) {
  return Eigen::Vector4d(-1.0, 4.0 * cfg.c_t / cfg.m_us, 0.0, 0.0);
}

double QuarterCarModel::road_velocity(double t, bool right) const {
  const double period = cfg_.bump_length / cfg_.speed;
  const bool inside = right ? (t >= 0.0 && t < period) : (t > 0.0 && t <= period);
  if (!inside) return 0.0;
  return cfg_.bump_height * kPi / period * std::cos(kPi * t / period);
}

double QuarterCarModel::run(double c_s, double k_s, double k_t, CarTrace* trace) const {
  check_inputs(c_s, k_s, k_t);
  const Eigen::Matrix4d a = system_matrix(c_s, k_s, k_t, cfg_);
  const Eigen::Vector4d b = input_vector(cfg_);
  const double dt = cfg_.dt;
  const auto steps = static_cast<std::size_t>(std::llround(cfg_.duration / dt));

  Eigen::Vector4d x = Eigen::Vector4d::Zero();
  auto record = [&](double t) {
    if (!trace) return;
    trace->t.push_back(t);
    trace->state.push_back(x);
  };
  record(0.0);
  double max_stroke = 0.0;

  if (cfg_.integrator == CarIntegrator::exact) {
    // First-order hold on the road velocity through the augmented exponential.
    Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
    m.block<4, 4>(0, 0) = a * dt;
    m.block<4, 1>(0, 4) = b * dt;
    m(4, 5) = 1.0;
    const Eigen::Matrix<double, 6, 6> e = m.exp();
    const Eigen::Matrix4d phi = e.block<4, 4>(0, 0);
    const Eigen::Vector4d g0 = e.block<4, 1>(0, 4);
    const Eigen::Vector4d g1 = e.block<4, 1>(0, 5);
    for (std::size_t k = 0; k < steps; ++k) {
      const double t0 = static_cast<double>(k) * dt;
      const double t1 = static_cast<double>(k + 1) * dt;
      const double u0 = road_velocity(t0, true);
      const double u1 = road_velocity(t1, false);
      x = phi * x + g0 * u0 + g1 * (u1 - u0);
      if (!(x.norm() < kBlowup)) throw std::runtime_error("quarter-car: unstable integration (state norm > 1e6)");
      max_stroke = std::max(max_stroke, std::abs(x(2)));
      record(t1);
    }
  } else {
    auto rhs = [&](const Eigen::Vector4d& s, double u) -> Eigen::Vector4d { return a * s + b * u; };
    for (std::size_t k = 0; k < steps; ++k) {
      const double t0 = static_cast<double>(k) * dt;
      const double t1 = static_cast<double>(k + 1) * dt;
      const double ua = road_velocity(t0, true);
      const double um = road_velocity(t0 + 0.5 * dt, true);
      const double ub = road_velocity(t1, false);
      const Eigen::Vector4d k1 = rhs(x, ua);
      const Eigen::Vector4d k2 = rhs(x + 0.5 * dt * k1, um);
      const Eigen::Vector4d k3 = rhs(x + 0.5 * dt * k2, um);
      const Eigen::Vector4d k4 = rhs(x + dt * k3, ub);
      x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!(x.norm() < kBlowup)) throw std::runtime_error("quarter-car: unstable integration (state norm > 1e6)");
      max_stroke = std::max(max_stroke, std::abs(x(2)));
      record(t1);
    }
  }
  return max_stroke;
}

CarTrace QuarterCarModel::simulate(double c_s, double k_s, double k_t) const {
  CarTrace trace;
  run(c_s, k_s, k_t, &trace);
  return trace;
}

double QuarterCarModel::max_stroke(double c_s, double k_s, double k_t) const { return run(c_s, k_s, k_t, nullptr); }

double QuarterCarModel::limit_state(double c_s, double k_s, double k_t) const {
  return 1.0 - max_stroke(c_s, k_s, k_t) / cfg_.x_c;
}

double quarter_car_solve(double c_s, double k_s, double k_t, const QuarterCarConfig& cfg) {
  return QuarterCarModel(cfg).limit_state(c_s, k_s, k_t);
}

double calibrate_bump_height(const QuarterCarConfig& cfg, double c_s, double k_s, double k_t, double ratio) {
  QuarterCarConfig unit = cfg;
  unit.bump_height = 1.0;
  const double stroke = QuarterCarModel(unit).max_stroke(c_s, k_s, k_t);
  if (!(stroke > 0.0)) throw std::runtime_error("calibrate_bump_height: zero response to a unit bump");
  return ratio * cfg.x_c / stroke;
}

}  // namespace fracpce
