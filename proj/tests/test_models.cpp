#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fracpce/models.hpp"

using namespace fracpce;

namespace {

constexpr double kE = 2.1e11, kT = 5e-3, kNu = 0.3;
constexpr double kCs = 1e4, kKs = 4.8e4, kKt = 2e5;

double car_energy(const Eigen::Vector4d& s, const QuarterCarConfig& cfg, double k_s, double k_t) {
  return 0.5 * (cfg.m_us / 4.0) * s(1) * s(1) + 0.5 * (cfg.m_s / 4.0) * s(3) * s(3) + 0.5 * k_t * s(0) * s(0) +
         0.5 * k_s * s(2) * s(2);
}

}  // namespace

TEST_CASE("gaussian sum") {
  const std::vector<double> x = {10.0, 10.0, 10.0};
  CHECK(gaussian_sum(x) == 50.0);
  const auto spec = default_model_spec(ModelKind::gaussian_sum);
  REQUIRE(spec.inputs.size() == 3);
  double mean = 0, var = 0;
  for (const auto& v : spec.inputs) {
    mean += v.mean();
    var += v.std() * v.std();
  }
  CHECK(20.0 + mean == doctest::Approx(50.0));
  CHECK(var == doctest::Approx(12.0));
  const auto model = make_model(spec);
  CHECK(model->dimension() == 3);
  CHECK(model->evaluate(x) == 50.0);
}

TEST_CASE("plate mesh and DOF count") {
  const PlateModel plate;
  CHECK(plate.nodes() == 121);
  CHECK(plate.active_dofs() == 330);
  const auto k = plate.stiffness(kE, kT, kNu);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(k);
  CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * dense.cwiseAbs().maxCoeff());
  // element blocks are symmetric too
  CHECK((plate.element_ka() - plate.element_ka().transpose()).cwiseAbs().maxCoeff() <= 1e-12 * plate.element_ka().cwiseAbs().maxCoeff());
  // total consistent load is pressure times area, less the half strip carried by the clamped nodes
  double fz = 0.0;
  const auto& f = plate.load();
  for (Eigen::Index i = 0; i < f.size(); i += 3) fz += f(i);
  CHECK(fz == doctest::Approx(95.0).epsilon(1e-12));
}

TEST_CASE("plate linearity and stiffness scaling") {
  PlateConfig cfg;
  const double w1 = plate_solve(kE, kT, kNu, cfg);
  cfg.pressure = 200.0;
  CHECK(plate_solve(kE, kT, kNu, cfg) == doctest::Approx(2.0 * w1).epsilon(1e-12));
  CHECK(plate_solve(2.0 * kE, kT, kNu) == doctest::Approx(0.5 * w1).epsilon(1e-12));
  // bending stiffness goes with t^3
  CHECK(plate_solve(kE, 2.0 * kT, kNu) == doctest::Approx(w1 / 8.0).epsilon(1e-12));
}

TEST_CASE("plate against cantilever strip theory") {
  // nu -> 0: a clamped-free plate under uniform load bends like a cantilever, w = q L^4 / (8 D)
  const double nu = 1e-6;
  const double d = kE * kT * kT * kT / (12.0 * (1.0 - nu * nu));
  PlateConfig cfg;
  cfg.elements = 20;
  const double w = plate_solve(kE, kT, nu, cfg);
  CHECK(w == doctest::Approx(100.0 / (8.0 * d)).epsilon(0.02));
}

TEST_CASE("plate mesh refinement") {
  PlateConfig fine;
  fine.elements = 20;
  const double coarse = plate_solve(kE, kT, kNu);
  const double ref = plate_solve(kE, kT, kNu, fine);
  CHECK(std::abs(coarse / ref - 1.0) < 0.05);
}

TEST_CASE("plate deflection decreases with thickness") {
  double prev = plate_solve(kE, 3.5e-3, kNu);
  for (double t = 3.6e-3; t <= 6.5e-3; t += 1e-4) {
    const double cur = plate_solve(kE, t, kNu);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("plate qoi alternatives and field dump") {
  PlateConfig cfg;
  cfg.qoi = PlateQoi::free_edge_midpoint;
  const double mid = plate_solve(kE, kT, kNu, cfg);
  const double mx = plate_solve(kE, kT, kNu);
  CHECK(mid > 0.0);
  CHECK(mid <= mx * (1 + 1e-12));
  const PlateModel plate;
  std::ostringstream os;
  plate.write_field_csv(os, plate.solve(kE, kT, kNu));
  std::istringstream is(os.str());
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 122);  // header and one row per node
  CHECK_THROWS(plate_solve(-1.0, kT, kNu));
  CHECK_THROWS(plate_solve(kE, kT, 0.6));
}

TEST_CASE("quarter car at rest stays at rest") {
  QuarterCarConfig cfg;
  cfg.bump_height = 0.0;
  CHECK(quarter_car_solve(kCs, kKs, kKt, cfg) == 1.0);
}

TEST_CASE("quarter car response is linear in the road amplitude") {
  QuarterCarConfig a, b;
  b.bump_height = 2.0 * a.bump_height;
  const QuarterCarModel ma(a), mb(b);
  CHECK(mb.max_stroke(kCs, kKs, kKt) == doctest::Approx(2.0 * ma.max_stroke(kCs, kKs, kKt)).epsilon(1e-8));
  CHECK(1.0 - quarter_car_solve(kCs, kKs, kKt, b) ==
        doctest::Approx(2.0 * (1.0 - quarter_car_solve(kCs, kKs, kKt, a))).epsilon(1e-8));
  CHECK(quarter_car_solve(kCs, kKs, kKt) <= 1.0);
}

TEST_CASE("quarter car time step refinement and integrator cross-check") {
  QuarterCarConfig half;
  half.dt = 5e-4;
  const double g = quarter_car_solve(kCs, kKs, kKt);
  CHECK(std::abs(quarter_car_solve(kCs, kKs, kKt, half) / g - 1.0) < 1e-3);
  QuarterCarConfig rk;
  rk.integrator = CarIntegrator::rk4;
  const double err = std::abs(quarter_car_solve(kCs, kKs, kKt, rk) / g - 1.0);
  CHECK(err < 1e-5);
  // and the gap closes as the step shrinks
  rk.dt = 5e-4;
  half.integrator = CarIntegrator::exact;
  CHECK(std::abs(quarter_car_solve(kCs, kKs, kKt, rk) / quarter_car_solve(kCs, kKs, kKt, half) - 1.0) < err);
}

TEST_CASE("undamped quarter car conserves energy once the bump has passed") {
  QuarterCarConfig cfg;
  const QuarterCarModel car(cfg);
  const auto trace = car.simulate(0.0, kKs, kKt);
  const double pulse_end = cfg.bump_length / cfg.speed;
  double e0 = -1.0, lo = 1e300, hi = 0.0;
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    if (trace.t[k] < pulse_end + cfg.dt) continue;
    const double e = car_energy(trace.state[k], cfg, kKs, kKt);
    if (e0 < 0) e0 = e;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  REQUIRE(e0 > 0.0);
  CHECK((hi - lo) / e0 < 5e-3);
  // with suspension damping it only decays
  const auto damped = car.simulate(kCs, kKs, kKt);
  double prev = 1e300;
  for (std::size_t k = 0; k < damped.t.size(); ++k) {
    if (damped.t[k] < pulse_end + cfg.dt) continue;
    const double e = car_energy(damped.state[k], cfg, kKs, kKt);
    CHECK(e <= prev * (1 + 1e-9));
    prev = e;
  }
}

TEST_CASE("bump calibration hits the target stroke ratio") {
  const QuarterCarConfig cfg;
  const double h = calibrate_bump_height(cfg, kCs, kKs, kKt, 0.6);
  QuarterCarConfig scaled = cfg;
  scaled.bump_height = h;
  CHECK(QuarterCarModel(scaled).max_stroke(kCs, kKs, kKt) == doctest::Approx(0.6 * cfg.x_c).epsilon(1e-9));
}

TEST_CASE("quarter car matrix entries") {
  const QuarterCarConfig cfg;
  const auto a = QuarterCarModel::system_matrix(kCs, kKs, kKt, cfg);
  CHECK(a(1, 0) == doctest::Approx(-4.0 * kKt / cfg.m_us));
  CHECK(a(1, 1) == doctest::Approx(-4.0 * kCs / cfg.m_us));
  CHECK(a(1, 2) == doctest::Approx(4.0 * kKs / cfg.m_us));
  CHECK(a(1, 3) == doctest::Approx(4.0 * kCs / cfg.m_us));
  const auto b = QuarterCarModel::input_vector(cfg);
  CHECK(b(0) == -1.0);
  CHECK(b(1) == 0.0);  // c_t = 0
  CHECK_THROWS(quarter_car_solve(-1.0, kKs, kKt));
  CHECK_THROWS(quarter_car_solve(kCs, 0.0, kKt));
}

TEST_CASE("model factory") {
  for (ModelKind k : {ModelKind::gaussian_sum, ModelKind::plate_fe, ModelKind::quarter_car}) {
    const auto spec = default_model_spec(k);
    const auto m = make_model(spec);
    CHECK(m->kind() == k);
    CHECK(m->dimension() == spec.inputs.size());
    std::vector<double> mean;
    for (const auto& v : spec.inputs) mean.push_back(v.mean());
    CHECK(std::isfinite(m->evaluate(mean)));
    CHECK(model_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS(model_kind_from_string("beam"));
}
