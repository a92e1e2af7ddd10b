#include "fracpce/pce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fracpce/kernels.hpp"

namespace fracpce {

namespace {

constexpr std::size_t kBlock = 2048;

// Per-dimension tables psi_d(xi_j) for one block of rows, laid out for the kernels.
class BlockTables {
 public:
  BlockTables(const MultiIndexSet& basis, const GermSpec& germ) : germ_(germ) {
    const std::size_t m = germ.dimension();
    max_deg_.resize(m);
    offdiag_.resize(m);
    tables_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      max_deg_[i] = basis.max_degree_in(i);
      offdiag_[i].resize(static_cast<std::size_t>(max_deg_[i]) + 1);
      for (int d = 0; d <= max_deg_[i]; ++d) offdiag_[i][d] = jacobi_offdiag(germ.families[i], d);
      tables_[i].resize((static_cast<std::size_t>(max_deg_[i]) + 1) * kBlock);
    }
  }

  void fill(const Matrix& xi, Eigen::Index row0, std::size_t len) {
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < germ_.dimension(); ++i) {
      const double* col = xi.col(static_cast<Eigen::Index>(i)).data() + row0;
      k.recurrence(offdiag_[i].data(), max_deg_[i], col, len, tables_[i].data());
    }
    len_ = len;
  }

  // Row pointers for the non-constant factors of one multi-index.
  std::size_t rows_for(const MultiIndex& a, const double** rows) const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] > 0) rows[r++] = tables_[i].data() + static_cast<std::size_t>(a[i]) * len_;
    return r;
  }

 private:
  const GermSpec& germ_;
  std::vector<int> max_deg_;
  std::vector<std::vector<double>> offdiag_;
  std::vector<std::vector<double>> tables_;
  std::size_t len_ = 0;
};

void check_germ(const MultiIndexSet& basis, const GermSpec& germ, const Matrix& xi) {
  if (basis.dim != germ.dimension() || static_cast<std::size_t>(xi.cols()) != germ.dimension())
    throw std::invalid_argument("PCE: dimension mismatch between basis, germ and samples");
}

double population_variance(const Vector& y) {
  const double mu = y.mean();
  return (y.array() - mu).square().mean();
}

}  // namespace

Matrix design_matrix(const MultiIndexSet& basis, const GermSpec& germ, const Matrix& xi) {
  check_germ(basis, germ, xi);
  if (xi.rows() < 1) throw std::invalid_argument("design_matrix: need at least one sample");
  const Eigen::Index n = xi.rows();
  Matrix psi(n, static_cast<Eigen::Index>(basis.size()));
  BlockTables tables(basis, germ);
  const auto& k = kernels::active();
  std::vector<const double*> rows(germ.dimension());
  for (Eigen::Index r0 = 0; r0 < n; r0 += kBlock) {
    const auto len = static_cast<std::size_t>(std::min<Eigen::Index>(kBlock, n - r0));
    tables.fill(xi, r0, len);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const std::size_t nr = tables.rows_for(basis[j], rows.data());
      k.product_rows(rows.data(), nr, len, psi.col(static_cast<Eigen::Index>(j)).data() + r0);
    }
  }
  return psi;
}

Vector eval_pce(const PceModel& model, const Matrix& xi) {
  check_germ(model.basis, model.germ, xi);
  const Eigen::Index n = xi.rows();
  Vector y = Vector::Zero(n);
  if (n == 0) return y;
  BlockTables tables(model.basis, model.germ);
  const auto& k = kernels::active();
  std::vector<const double*> rows(model.germ.dimension());
  for (Eigen::Index r0 = 0; r0 < n; r0 += kBlock) {
    const auto len = static_cast<std::size_t>(std::min<Eigen::Index>(kBlock, n - r0));
    tables.fill(xi, r0, len);
    for (std::size_t j = 0; j < model.basis.size(); ++j) {
      const double b = model.beta(static_cast<Eigen::Index>(j));
      if (b == 0.0) continue;
      const std::size_t nr = tables.rows_for(model.basis[j], rows.data());
      k.accumulate_term(b, rows.data(), nr, len, y.data() + r0);
    }
  }
  return y;
}

PceModel fit_ols(const ExperimentalDesign& ed, const MultiIndexSet& basis, const GermSpec& germ) {
  if (ed.y.size() != ed.xi.rows()) throw std::invalid_argument("fit_ols: responses missing or mismatched");
  if (ed.xi.rows() < 1) throw std::invalid_argument("fit_ols: empty experimental design");
  if (!ed.y.allFinite()) throw std::invalid_argument("fit_ols: non-finite responses");
  const Matrix psi = design_matrix(basis, germ, ed.xi);
  Eigen::ColPivHouseholderQR<Matrix> qr(psi);
  const auto rank = static_cast<std::size_t>(qr.rank());
  if (rank < basis.size()) throw RankDeficientError(rank, basis.size());

  PceModel model;
  model.germ = germ;
  model.basis = basis;
  model.beta = qr.solve(ed.y);
  model.n_train = ed.size();

  const double var = population_variance(ed.y);
  const Vector resid = ed.y - psi * model.beta;
  model.r2 = var > 0.0 ? 1.0 - resid.squaredNorm() / static_cast<double>(ed.y.size()) / var
                       : std::numeric_limits<double>::quiet_NaN();
  model.q2 = std::numeric_limits<double>::quiet_NaN();
  if (ed.size() > basis.size() && var > 0.0) {
    try {
      model.q2 = q_squared_loo(model, ed);
    } catch (const std::exception&) {
      // leverage singularity: leave q2 undefined
    }
  }
  return model;
}

double r_squared(const PceModel& model, const ExperimentalDesign& validation) {
  if (validation.y.size() == 0) throw std::invalid_argument("r_squared: empty validation set");
  const double var = population_variance(validation.y);
  if (!(var > 0.0)) throw std::domain_error("r_squared: validation responses have zero variance");
  const Vector pred = eval_pce(model, validation.xi);
  const double mse = (validation.y - pred).squaredNorm() / static_cast<double>(validation.y.size());
  return 1.0 - mse / var;
}

double q_squared_loo(const PceModel& model, const ExperimentalDesign& training) {
  const auto n = static_cast<std::size_t>(training.y.size());
  if (n <= model.basis.size()) throw std::domain_error("q_squared_loo: need more samples than basis terms");
  const double var = population_variance(training.y);
  if (!(var > 0.0)) throw std::domain_error("q_squared_loo: responses have zero variance");
  const Matrix psi = design_matrix(model.basis, model.germ, training.xi);
  Eigen::HouseholderQR<Matrix> qr(psi);
  const Matrix q = qr.householderQ() * Matrix::Identity(psi.rows(), psi.cols());
  const Vector h = q.rowwise().squaredNorm();
  const Vector resid = training.y - psi * model.beta;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    if (h(i) >= 1.0 - 1e-12) throw std::domain_error("q_squared_loo: leverage singularity (h_ii ~ 1)");
    const double e = resid(i) / (1.0 - h(i));
    acc += e * e;
  }
  return 1.0 - acc / static_cast<double>(n) / var;
}

MomentSet moments_from_central(double mean, double variance, double central3, double central4) {
  MomentSet m;
  m.mean = mean;
  m.variance = variance;
  m.central3 = central3;
  m.central4 = central4;
  if (variance > 0.0) {
    m.skewness = central3 / std::pow(variance, 1.5);
    m.kurtosis = central4 / (variance * variance);
  } else {
    m.skewness = 0.0;
    m.kurtosis = 3.0;
  }
  const double mu2 = mean * mean;
  m.raw[0] = mean;
  m.raw[1] = variance + mu2;
  m.raw[2] = central3 + 3.0 * mean * variance + mu2 * mean;
  m.raw[3] = central4 + 4.0 * mean * central3 + 6.0 * mu2 * variance + mu2 * mu2;
  return m;
}

namespace {

// Dense per-family tables of E[psi_a psi_b psi_c] and E[psi_a psi_b psi_c psi_d].
struct ProductTables {
  int dmax = 0;
  std::vector<double> e3, e4;

  ProductTables(Family f, int d) : dmax(d) {
    const std::size_t s = static_cast<std::size_t>(d) + 1;
    e3.assign(s * s * s, 0.0);
    e4.assign(s * s * s * s, 0.0);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; b <= d; ++b)
        for (int c = 0; c <= d; ++c) {
          const int deg3[3] = {a, b, c};
          e3[(a * s + b) * s + c] = product_expectation(f, deg3);
          for (int e = 0; e <= d; ++e) {
            const int deg4[4] = {a, b, c, e};
            e4[((a * s + b) * s + c) * s + e] = product_expectation(f, deg4);
          }
        }
  }
  double get3(int a, int b, int c) const {
    const std::size_t s = static_cast<std::size_t>(dmax) + 1;
    return e3[(a * s + b) * s + c];
  }
  double get4(int a, int b, int c, int d) const {
    const std::size_t s = static_cast<std::size_t>(dmax) + 1;
    return e4[((a * s + b) * s + c) * s + d];
  }
};

}  // namespace

MomentSet moments_from_pce(const PceModel& model, const MomentOptions& opts) {
  const auto& basis = model.basis;
  const std::size_t p = basis.size();
  if (static_cast<std::size_t>(model.beta.size()) != p) throw std::invalid_argument("moments_from_pce: beta size mismatch");
  if (p == 0 || !basis[0].is_zero()) throw std::invalid_argument("moments_from_pce: first basis term must be constant");

  const double mean = model.beta(0);
  const double variance = model.beta.tail(static_cast<Eigen::Index>(p - 1)).squaredNorm();

  if (p > opts.exhaustive_cap) {
    const Matrix xi = sample_germ(model.germ, opts.fallback_samples, opts.seed);
    Vector y = eval_pce(model, xi);
    y.array() -= mean;
    const kernels::PowerSums s = kernels::active().power_sums(y.data(), static_cast<std::size_t>(y.size()));
    const double n = static_cast<double>(y.size());
    MomentSet m = moments_from_central(mean, variance, s.s3 / n, s.s4 / n);
    m.sampled_higher = true;
    return m;
  }

  const std::size_t dim = basis.dim;
  std::vector<ProductTables> tables;
  tables.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) tables.emplace_back(model.germ.families[i], basis.max_degree_in(i));

  // Active (non-constant, nonzero) terms.
  std::vector<std::size_t> act;
  for (std::size_t j = 1; j < p; ++j)
    if (model.beta(static_cast<Eigen::Index>(j)) != 0.0) act.push_back(j);
  const std::size_t na = act.size();

  auto parity_ok3 = [&](const MultiIndex& a, const MultiIndex& b, const MultiIndex& c) {
    for (std::size_t i = 0; i < dim; ++i)
      if ((a[i] + b[i] + c[i]) & 1) return false;
    return true;
  };

  double c3 = 0.0;
  double c4 = 0.0;
  for (std::size_t ia = 0; ia < na; ++ia) {
    const MultiIndex& a = basis[act[ia]];
    const double ba = model.beta(static_cast<Eigen::Index>(act[ia]));
    for (std::size_t ib = ia; ib < na; ++ib) {
      const MultiIndex& b = basis[act[ib]];
      const double bb = model.beta(static_cast<Eigen::Index>(act[ib]));
      for (std::size_t ic = ib; ic < na; ++ic) {
        const MultiIndex& c = basis[act[ic]];
        const double bc = model.beta(static_cast<Eigen::Index>(act[ic]));
        if (parity_ok3(a, b, c)) {
          double e = 1.0;
          for (std::size_t i = 0; i < dim && e != 0.0; ++i) e *= tables[i].get3(a[i], b[i], c[i]);
          if (e != 0.0) {
            const double mult = (ia == ib && ib == ic) ? 1.0 : (ia == ib || ib == ic) ? 3.0 : 6.0;
            c3 += mult * ba * bb * bc * e;
          }
        }
        for (std::size_t id = ic; id < na; ++id) {
          const MultiIndex& d = basis[act[id]];
          bool parity = true;
          for (std::size_t i = 0; i < dim; ++i)
            if ((a[i] + b[i] + c[i] + d[i]) & 1) {
              parity = false;
              break;
            }
          if (!parity) continue;
          double e = 1.0;
          for (std::size_t i = 0; i < dim && e != 0.0; ++i) e *= tables[i].get4(a[i], b[i], c[i], d[i]);
          if (e == 0.0) continue;
          // 4!/(k1! k2! ...) over runs of equal sorted positions.
          double mult;
          const bool e1 = ia == ib, e2 = ib == ic, e3 = ic == id;
          const int eq = int(e1) + int(e2) + int(e3);
          if (eq == 0) mult = 24.0;
          else if (eq == 3) mult = 1.0;
          else if (eq == 1) mult = 12.0;
          else mult = (e1 && e3) ? 6.0 : 4.0;  // two pairs vs a triple
          c4 += mult * ba * bb * bc * model.beta(static_cast<Eigen::Index>(act[id])) * e;
        }
      }
    }
  }
  return moments_from_central(mean, variance, c3, c4);
}

}  // namespace fracpce
