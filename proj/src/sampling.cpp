#include "fracpce/sampling.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fracpce/rng.hpp"

namespace fracpce {

Matrix lhs(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0 || m == 0) throw std::domain_error("lhs: n and M must be positive");
  Rng rng(seed);
  Matrix u(n, m);
  std::vector<std::size_t> perm(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < m; ++j) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    for (std::size_t i = 0; i < n; ++i) {
      double v = (static_cast<double>(perm[i]) + rng.uniform()) * inv_n;
      // (k + U)/n can round onto the stratum edge for large n.
      const double lo = static_cast<double>(perm[i]) * inv_n;
      const double hi = static_cast<double>(perm[i] + 1) * inv_n;
      if (v <= lo) v = std::nextafter(lo, hi);
      if (v >= hi) v = std::nextafter(hi, lo);
      u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return u;
}

ExperimentalDesign sample_inputs(const InputVector& inputs, const GermSpec& germ, std::size_t n, std::uint64_t seed) {
  if (inputs.size() != germ.dimension()) throw std::invalid_argument("sample_inputs: germ dimension mismatch");
  const Matrix u = lhs(n, inputs.size(), seed);
  ExperimentalDesign ed;
  ed.x.resize(u.rows(), u.cols());
  ed.xi.resize(u.rows(), u.cols());
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const auto& var = inputs[static_cast<std::size_t>(j)];
    const Family f = germ.families[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      const double x = var.inverse_cdf(u(i, j));
      ed.x(i, j) = x;
      // Map the germ straight from u; equal to to_germ(x) but without the round trip.
      if (var.kind() == VariableKind::normal && f == Family::hermite)
        ed.xi(i, j) = (x - var.mean()) / var.std();
      else
        ed.xi(i, j) = germ_inverse_cdf(f, u(i, j));
    }
  }
  return ed;
}

Matrix sample_germ(const GermSpec& germ, std::size_t n, std::uint64_t seed) {
  Matrix u = lhs(n, germ.dimension(), seed);
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const Family f = germ.families[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < u.rows(); ++i) u(i, j) = germ_inverse_cdf(f, u(i, j));
  }
  return u;
}

}  // namespace fracpce
