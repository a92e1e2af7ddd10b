#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace fracpce::kernels::detail {

namespace {

constexpr std::size_t kLanes = 4;

void recurrence(const double* offdiag, int max_degree, const double* xi, std::size_t n, double* out) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) _mm256_storeu_pd(out + j, one);
  for (; j < n; ++j) out[j] = 1.0;
  if (max_degree == 0) return;

  const double inv1 = 1.0 / offdiag[1];
  const __m256d vinv1 = _mm256_set1_pd(inv1);
  j = 0;
  for (; j + kLanes <= n; j += kLanes) _mm256_storeu_pd(out + n + j, _mm256_mul_pd(_mm256_loadu_pd(xi + j), vinv1));
  for (; j < n; ++j) out[n + j] = xi[j] * inv1;

  for (int d = 1; d < max_degree; ++d) {
    const double* prev = out + static_cast<std::size_t>(d - 1) * n;
    const double* cur = out + static_cast<std::size_t>(d) * n;
    double* next = out + static_cast<std::size_t>(d + 1) * n;
    const double b = offdiag[d];
    const double inv = 1.0 / offdiag[d + 1];
    const __m256d vb = _mm256_set1_pd(b);
    const __m256d vinv = _mm256_set1_pd(inv);
    j = 0;
    for (; j + kLanes <= n; j += kLanes) {
      const __m256d x = _mm256_loadu_pd(xi + j);
      const __m256d c = _mm256_loadu_pd(cur + j);
      const __m256d p = _mm256_loadu_pd(prev + j);
      const __m256d t = _mm256_fmsub_pd(x, c, _mm256_mul_pd(vb, p));
      _mm256_storeu_pd(next + j, _mm256_mul_pd(t, vinv));
    }
    for (; j < n; ++j) next[j] = (xi[j] * cur[j] - b * prev[j]) * inv;
  }
}

void product_rows(const double* const* rows, std::size_t n_rows, std::size_t n, double* out) {
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    __m256d acc = _mm256_set1_pd(1.0);
    if (n_rows > 0) acc = _mm256_loadu_pd(rows[0] + j);
    for (std::size_t r = 1; r < n_rows; ++r) acc = _mm256_mul_pd(acc, _mm256_loadu_pd(rows[r] + j));
    _mm256_storeu_pd(out + j, acc);
  }
  for (; j < n; ++j) {
    double t = n_rows > 0 ? rows[0][j] : 1.0;
    for (std::size_t r = 1; r < n_rows; ++r) t *= rows[r][j];
    out[j] = t;
  }
}

void accumulate_term(double coef, const double* const* rows, std::size_t n_rows, std::size_t n, double* y) {
  const __m256d vc = _mm256_set1_pd(coef);
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    __m256d t = vc;
    for (std::size_t r = 0; r < n_rows; ++r) t = _mm256_mul_pd(t, _mm256_loadu_pd(rows[r] + j));
    _mm256_storeu_pd(y + j, _mm256_add_pd(_mm256_loadu_pd(y + j), t));
  }
  for (; j < n; ++j) {
    double t = coef;
    for (std::size_t r = 0; r < n_rows; ++r) t *= rows[r][j];
    y[j] += t;
  }
}

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

PowerSums power_sums(const double* y, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  __m256d s1 = zero, s2 = zero, s3 = zero, s4 = zero, a1 = zero, a3 = zero;
  __m256i nonpos = _mm256_setzero_si256();
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const __m256d v = _mm256_loadu_pd(y + j);
    const __m256d v2 = _mm256_mul_pd(v, v);
    const __m256d a = _mm256_andnot_pd(sign_mask, v);
    s1 = _mm256_add_pd(s1, v);
    s2 = _mm256_add_pd(s2, v2);
    s3 = _mm256_fmadd_pd(v2, v, s3);
    s4 = _mm256_fmadd_pd(v2, v2, s4);
    a1 = _mm256_add_pd(a1, a);
    a3 = _mm256_fmadd_pd(v2, a, a3);
    // Comparison mask is all ones (-1 as integer) where v <= 0.
    const __m256d le = _mm256_cmp_pd(v, zero, _CMP_LE_OQ);
    nonpos = _mm256_sub_epi64(nonpos, _mm256_castpd_si256(le));
  }
  PowerSums s;
  s.count = n;
  s.s1 = hsum(s1);
  s.s2 = hsum(s2);
  s.s3 = hsum(s3);
  s.s4 = hsum(s4);
  s.a1 = hsum(a1);
  s.a3 = hsum(a3);
  alignas(32) long long counts[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(counts), nonpos);
  s.nonpositive = static_cast<std::size_t>(counts[0] + counts[1] + counts[2] + counts[3]);
  for (; j < n; ++j) {
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

KernelTable avx2_table() { return {recurrence, product_rows, accumulate_term, power_sums}; }

}  // namespace fracpce::kernels::detail
