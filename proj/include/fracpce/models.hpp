#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracpce/distributions.hpp"

namespace fracpce {

enum class ModelKind { gaussian_sum, plate_fe, quarter_car };

std::string_view to_string(ModelKind k);
ModelKind model_kind_from_string(std::string_view name);

/// Y = 20 + X1 + X2 + X3.
double gaussian_sum(std::span<const double> x);

enum class PlateQoi { max_abs_deflection, free_edge_midpoint };

struct PlateConfig {
  double side = 1.0;     // m, square plate
  int elements = 10;     // per side
  double pressure = 100.0;  // Pa, uniform on the top surface
  PlateQoi qoi = PlateQoi::max_abs_deflection;
};

/// Thin square plate clamped along x = 0, meshed with 4-node non-conforming
/// Kirchhoff rectangles (DOFs w, theta_x = dw/dy, theta_y = -dw/dx).
/// The stiffness is K = D0 (K_a + nu K_b) with D0 = E t^3 / (12 (1 - nu^2)),
/// so K_a and K_b are assembled once and reused.
class PlateModel {
 public:
  explicit PlateModel(const PlateConfig& cfg = {});

  std::size_t active_dofs() const { return n_active_; }
  std::size_t nodes() const { return static_cast<std::size_t>((cfg_.elements + 1) * (cfg_.elements + 1)); }
  const PlateConfig& config() const { return cfg_; }

  /// Active-DOF displacement vector. Throws std::runtime_error when the
  /// system is not positive definite.
  Eigen::VectorXd solve(double young, double thickness, double poisson) const;
  double qoi(double young, double thickness, double poisson) const;

  /// Assembled active stiffness for the given inputs (for inspection/tests).
  Eigen::SparseMatrix<double> stiffness(double young, double thickness, double poisson) const;
  const Eigen::VectorXd& load() const { return load_; }

  /// Node table with vertical deflection (x, y, w, theta_x, theta_y); clamped nodes report zeros.
  void write_field_csv(std::ostream& os, const Eigen::VectorXd& u) const;

  /// 12x12 element matrices and load for the element size of this mesh.
  const Eigen::Matrix<double, 12, 12>& element_ka() const { return ke_a_; }
  const Eigen::Matrix<double, 12, 12>& element_kb() const { return ke_b_; }

 private:
  int node_id(int i, int j) const { return j * (cfg_.elements + 1) + i; }

  PlateConfig cfg_;
  Eigen::Matrix<double, 12, 12> ke_a_, ke_b_;
  std::vector<int> dof_map_;  // global dof -> active index or -1
  std::size_t n_active_ = 0;
  Eigen::SparseMatrix<double> k_a_, k_b_;
  Eigen::VectorXd load_;
  std::size_t generation_ = 0;  // distinguishes models that reuse an address
};

/// One-shot solve as a free function.
double plate_solve(double young, double thickness, double poisson, const PlateConfig& cfg = {});

enum class CarIntegrator { exact, rk4 };

struct QuarterCarConfig {
  double m_s = 1460.0;    // kg
  double m_us = 160.0;    // kg
  double c_t = 0.0;       // tyre damping
  double bump_height = 0.05;  // m
  double bump_length = 5.0;   // m
  double speed = 10.0;        // m/s
  double duration = 5.0;      // s
  double dt = 1e-3;           // s
  double x_c = 0.03;          // stroke threshold, m
  CarIntegrator integrator = CarIntegrator::exact;
};

struct CarTrace {
  std::vector<double> t;
  std::vector<Eigen::Vector4d> state;  // x_us - x0, xdot_us, x_s - x_us, xdot_s
};

/// 4-state quarter-car LTI model driven by a half-sine bump through the road velocity.
class QuarterCarModel {
 public:
  explicit QuarterCarModel(const QuarterCarConfig& cfg = {});

  const QuarterCarConfig& config() const { return cfg_; }

  static Eigen::Matrix4d system_matrix(double c_s, double k_s, double k_t, const QuarterCarConfig& cfg);
  static Eigen::Vector4d input_vector(const QuarterCarConfig& cfg);

  /// Road velocity; `right` selects the one-sided limit at discontinuities.
  double road_velocity(double t, bool right) const;

  /// Limit state g = 1 - max_t |x_s - x_us| / x_c. Throws std::runtime_error
  /// when the state norm exceeds 1e6.
  double limit_state(double c_s, double k_s, double k_t) const;
  double max_stroke(double c_s, double k_s, double k_t) const;
  CarTrace simulate(double c_s, double k_s, double k_t) const;

 private:
  double run(double c_s, double k_s, double k_t, CarTrace* trace) const;

  QuarterCarConfig cfg_;
};

double quarter_car_solve(double c_s, double k_s, double k_t, const QuarterCarConfig& cfg = {});

/// Bump height giving max stroke = ratio * x_c at the given inputs (stroke is linear in height).
double calibrate_bump_height(const QuarterCarConfig& cfg, double c_s, double k_s, double k_t, double ratio = 0.6);

struct ModelSpec {
  ModelKind kind = ModelKind::gaussian_sum;
  InputVector inputs;
  PlateConfig plate;
  QuarterCarConfig car;
};

/// Default input models for each benchmark.
ModelSpec default_model_spec(ModelKind kind);

/// Uniform interface over the three models. Implementations are immutable
/// and safe to evaluate concurrently.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;
  virtual double evaluate(std::span<const double> x) const = 0;
  virtual std::size_t dimension() const = 0;
  virtual ModelKind kind() const = 0;
};

std::unique_ptr<ForwardModel> make_model(const ModelSpec& spec);

}  // namespace fracpce
