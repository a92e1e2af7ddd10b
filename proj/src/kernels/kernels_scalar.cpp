#include <cmath>

#include "kernels_impl.hpp"

namespace fracpce::kernels::detail {

namespace {

void recurrence(const double* offdiag, int max_degree, const double* xi, std::size_t n, double* out) {
  for (std::size_t j = 0; j < n; ++j) out[j] = 1.0;
  if (max_degree == 0) return;
  const double inv1 = 1.0 / offdiag[1];
  for (std::size_t j = 0; j < n; ++j) out[n + j] = xi[j] * inv1;
  for (int d = 1; d < max_degree; ++d) {
    const double* prev = out + static_cast<std::size_t>(d - 1) * n;
    const double* cur = out + static_cast<std::size_t>(d) * n;
    double* next = out + static_cast<std::size_t>(d + 1) * n;
    const double b = offdiag[d];
    const double inv = 1.0 / offdiag[d + 1];
    for (std::size_t j = 0; j < n; ++j) next[j] = (xi[j] * cur[j] - b * prev[j]) * inv;
  }
}

void product_rows(const double* const* rows, std::size_t n_rows, std::size_t n, double* out) {
  if (n_rows == 0) {
    for (std::size_t j = 0; j < n; ++j) out[j] = 1.0;
    return;
  }
  for (std::size_t j = 0; j < n; ++j) out[j] = rows[0][j];
  for (std::size_t r = 1; r < n_rows; ++r)
    for (std::size_t j = 0; j < n; ++j) out[j] *= rows[r][j];
}

void accumulate_term(double coef, const double* const* rows, std::size_t n_rows, std::size_t n, double* y) {
  for (std::size_t j = 0; j < n; ++j) {
    double t = coef;
    for (std::size_t r = 0; r < n_rows; ++r) t *= rows[r][j];
    y[j] += t;
  }
}

PowerSums power_sums(const double* y, std::size_t n) {
  PowerSums s;
  s.count = n;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = y[j];
    const double v2 = v * v;
    const double a = std::abs(v);
    s.s1 += v;
    s.s2 += v2;
    s.s3 += v2 * v;
    s.s4 += v2 * v2;
    s.a1 += a;
    s.a3 += v2 * a;
    if (v <= 0.0) ++s.nonpositive;
  }
  return s;
}

}  // namespace

KernelTable scalar_table() { return {recurrence, product_rows, accumulate_term, power_sums}; }

}  // namespace fracpce::kernels::detail
