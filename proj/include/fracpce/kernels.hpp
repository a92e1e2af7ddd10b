#pragma once

// Data-parallel inner loops with a portable scalar reference and an AVX2/FMA
// variant. The variant is chosen once at startup from CPUID; set
// FRACPCE_SIMD=scalar in the environment to force the reference path.

#include <cstddef>
#include <string_view>

namespace fracpce::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Sums used for sample moments. `nonpositive` counts entries y <= 0.
struct PowerSums {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;  // sum y^k
  double a1 = 0.0, a3 = 0.0;                      // sum |y|, sum |y|^3
  std::size_t nonpositive = 0;
  std::size_t count = 0;
};

struct KernelTable {
  /// Orthonormal three-term recurrence on a batch of points.
  /// offdiag[k] = b_k for k = 0..max_degree; out is (max_degree+1) rows of
  /// length n, row-major, out[d*n + j] = psi_d(xi[j]).
  void (*recurrence)(const double* offdiag, int max_degree, const double* xi, std::size_t n, double* out);

  /// out[j] = prod_r rows[r][j].
  void (*product_rows)(const double* const* rows, std::size_t n_rows, std::size_t n, double* out);

  /// y[j] += coef * prod_r rows[r][j].
  void (*accumulate_term)(double coef, const double* const* rows, std::size_t n_rows, std::size_t n, double* y);

  PowerSums (*power_sums)(const double* y, std::size_t n);
};

const KernelTable& table(Isa isa);
bool available(Isa isa);

/// The table selected for this process.
const KernelTable& active();
Isa active_isa();

}  // namespace fracpce::kernels
