#include <Eigen/SparseCholesky>
#include <array>
#include <atomic>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "fracpce/models.hpp"

namespace fracpce {

namespace {

using Mat12 = Eigen::Matrix<double, 12, 12>;
using Row12 = Eigen::Matrix<double, 1, 12>;

// Monomials 1, x, y, x2, xy, y2, x3, x2y, xy2, y3, x3y, xy3 and derivatives.
Row12 monomials(double x, double y) {
  Row12 p;
  p << 1, x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y, x * x * x * y, x * y * y * y;
  return p;
}
Row12 d_dx(double x, double y) {
  Row12 p;
  p << 0, 1, 0, 2 * x, y, 0, 3 * x * x, 2 * x * y, y * y, 0, 3 * x * x * y, y * y * y;
  return p;
}
Row12 d_dy(double x, double y) {
  Row12 p;
  p << 0, 0, 1, 0, x, 2 * y, 0, x * x, 2 * x * y, 3 * y * y, x * x * x, 3 * x * y * y;
  return p;
}
Row12 d_xx(double x, double y) {
  Row12 p;
  p << 0, 0, 0, 2, 0, 0, 6 * x, 2 * y, 0, 0, 6 * x * y, 0;
  return p;
}
Row12 d_yy(double x, double y) {
  Row12 p;
  p << 0, 0, 0, 0, 0, 2, 0, 0, 2 * x, 6 * y, 0, 6 * x * y;
  return p;
}
Row12 d_xy(double x, double y) {
  Row12 p;
  p << 0, 0, 0, 0, 1, 0, 0, 2 * x, 2 * y, 0, 3 * x * x, 3 * y * y;
  return p;
}

struct ElementData {
  Mat12 ka, kb;
  Eigen::Matrix<double, 12, 1> load;  // per unit pressure
};

// Adini-Clough-Melosh rectangle of size lx by ly, nodes counter-clockwise from (0,0).
ElementData acm_element(double lx, double ly) {
  const std::array<std::array<double, 2>, 4> corners = {{{0, 0}, {lx, 0}, {lx, ly}, {0, ly}}};
  Mat12 c;
  for (int n = 0; n < 4; ++n) {
    const double x = corners[n][0], y = corners[n][1];
    c.row(3 * n) = monomials(x, y);
    c.row(3 * n + 1) = d_dy(x, y);   // theta_x = dw/dy
    c.row(3 * n + 2) = -d_dx(x, y);  // theta_y = -dw/dx
  }
  const Mat12 cinv = c.inverse();

  // 4-point Gauss-Legendre per direction integrates the quartic integrands exactly.
  const double gp[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
  const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
  // Da = diag(1, 1, 1/2), Db = [[0,1,0],[1,0,0],[0,0,-1/2]] on curvatures (w_xx, w_yy, 2 w_xy).
  Eigen::Matrix3d da = Eigen::Matrix3d::Zero(), db = Eigen::Matrix3d::Zero();
  da(0, 0) = 1.0;
  da(1, 1) = 1.0;
  da(2, 2) = 0.5;
  db(0, 1) = db(1, 0) = 1.0;
  db(2, 2) = -0.5;

  ElementData e;
  e.ka.setZero();
  e.kb.setZero();
  e.load.setZero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double x = 0.5 * lx * (gp[i] + 1.0);
      const double y = 0.5 * ly * (gp[j] + 1.0);
      const double wt = gw[i] * gw[j] * 0.25 * lx * ly;
      Eigen::Matrix<double, 3, 12> b;
      b.row(0) = d_xx(x, y) * cinv;
      b.row(1) = d_yy(x, y) * cinv;
      b.row(2) = 2.0 * d_xy(x, y) * cinv;
      e.ka += wt * b.transpose() * da * b;
      e.kb += wt * b.transpose() * db * b;
      e.load += wt * (monomials(x, y) * cinv).transpose();
    }
  e.ka = 0.5 * (e.ka + e.ka.transpose()).eval();
  e.kb = 0.5 * (e.kb + e.kb.transpose()).eval();
  return e;
}

}  // namespace

PlateModel::PlateModel(const PlateConfig& cfg) : cfg_(cfg) {
  if (cfg.elements < 2) throw std::invalid_argument("PlateModel: mesh must be at least 2x2");
  if (!(cfg.side > 0.0)) throw std::invalid_argument("PlateModel: side length must be positive");
  const int ne = cfg.elements;
  const double h = cfg.side / ne;
  const ElementData el = acm_element(h, h);
  ke_a_ = el.ka;
  ke_b_ = el.kb;

  const int nn = (ne + 1) * (ne + 1);
  dof_map_.assign(static_cast<std::size_t>(3 * nn), -1);
  int next = 0;
  for (int j = 0; j <= ne; ++j)
    for (int i = 0; i <= ne; ++i) {
      if (i == 0) continue;  // clamped edge x = 0
      for (int k = 0; k < 3; ++k) dof_map_[static_cast<std::size_t>(3 * node_id(i, j) + k)] = next++;
    }
  n_active_ = static_cast<std::size_t>(next);

  std::vector<Eigen::Triplet<double>> ta, tb;
  load_ = Eigen::VectorXd::Zero(next);
  for (int ey = 0; ey < ne; ++ey)
    for (int ex = 0; ex < ne; ++ex) {
      const int nodes[4] = {node_id(ex, ey), node_id(ex + 1, ey), node_id(ex + 1, ey + 1), node_id(ex, ey + 1)};
      int map[12];
      for (int n = 0; n < 4; ++n)
        for (int k = 0; k < 3; ++k) map[3 * n + k] = dof_map_[static_cast<std::size_t>(3 * nodes[n] + k)];
      for (int r = 0; r < 12; ++r) {
        if (map[r] < 0) continue;
        load_(map[r]) += cfg.pressure * el.load(r);
        for (int c = 0; c < 12; ++c) {
          if (map[c] < 0) continue;
          ta.emplace_back(map[r], map[c], el.ka(r, c));
          tb.emplace_back(map[r], map[c], el.kb(r, c));
        }
      }
    }
  k_a_.resize(next, next);
  k_b_.resize(next, next);
  k_a_.setFromTriplets(ta.begin(), ta.end());
  k_b_.setFromTriplets(tb.begin(), tb.end());
  static std::atomic<std::size_t> counter{0};
  generation_ = ++counter;
}

Eigen::SparseMatrix<double> PlateModel::stiffness(double young, double thickness, double poisson) const {
  if (!(young > 0.0) || !(thickness > 0.0)) throw std::domain_error("PlateModel: E and t must be positive");
  if (!(poisson > 0.0 && poisson < 0.5)) throw std::domain_error("PlateModel: Poisson ratio must lie in (0, 0.5)");
  const double d0 = young * thickness * thickness * thickness / (12.0 * (1.0 - poisson * poisson));
  Eigen::SparseMatrix<double> k = d0 * (k_a_ + poisson * k_b_);
  return k;
}

Eigen::VectorXd PlateModel::solve(double young, double thickness, double poisson) const {
  if (!(young > 0.0) || !(thickness > 0.0)) throw std::domain_error("PlateModel: E and t must be positive");
  if (!(poisson > 0.0 && poisson < 0.5)) throw std::domain_error("PlateModel: Poisson ratio must lie in (0, 0.5)");
  const Eigen::SparseMatrix<double> k = k_a_ + poisson * k_b_;
  // The sparsity pattern never changes, so each thread keeps one symbolic
  // analysis per model and only refactorizes numerically.
  struct Cache {
    const PlateModel* owner = nullptr;
    std::size_t generation = 0;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
  };
  thread_local Cache cache;
  if (cache.owner != this || cache.generation != generation_) {
    cache.llt.analyzePattern(k);
    cache.owner = this;
    cache.generation = generation_;
  }
  cache.llt.factorize(k);
  if (cache.llt.info() != Eigen::Success) throw std::runtime_error("PlateModel: stiffness matrix is not positive definite");
  // K = D0 (K_a + nu K_b) with the unit-D0 system factorized above.
  const double d0 = young * thickness * thickness * thickness / (12.0 * (1.0 - poisson * poisson));
  Eigen::VectorXd u = cache.llt.solve(load_) / d0;
  if (cache.llt.info() != Eigen::Success || !u.allFinite()) throw std::runtime_error("PlateModel: solve failed");
  return u;
}

double PlateModel::qoi(double young, double thickness, double poisson) const {
  const Eigen::VectorXd u = solve(young, thickness, poisson);
  const int ne = cfg_.elements;
  if (cfg_.qoi == PlateQoi::free_edge_midpoint) {
    const int idx = dof_map_[static_cast<std::size_t>(3 * node_id(ne, ne / 2))];
    return std::abs(u(idx));
  }
  double m = 0.0;
  for (int j = 0; j <= ne; ++j)
    for (int i = 1; i <= ne; ++i) m = std::max(m, std::abs(u(dof_map_[static_cast<std::size_t>(3 * node_id(i, j))])));
  return m;
}

void PlateModel::write_field_csv(std::ostream& os, const Eigen::VectorXd& u) const {
  const int ne = cfg_.elements;
  const double h = cfg_.side / ne;
  os << "node,x,y,w,theta_x,theta_y\n";
  os.precision(12);
  for (int j = 0; j <= ne; ++j)
    for (int i = 0; i <= ne; ++i) {
      const int n = node_id(i, j);
      os << n << ',' << i * h << ',' << j * h;
      for (int k = 0; k < 3; ++k) {
        const int d = dof_map_[static_cast<std::size_t>(3 * n + k)];
        os << ',' << (d < 0 ? 0.0 : u(d));
      }
      os << '\n';
    }
}

double plate_solve(double young, double thickness, double poisson, const PlateConfig& cfg) {
  return PlateModel(cfg).qoi(young, thickness, poisson);
}

}  // namespace fracpce
