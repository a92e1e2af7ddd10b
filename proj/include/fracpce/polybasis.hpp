#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fracpce {

/// Univariate orthonormal families. Hermite is orthonormal under the standard
/// normal density; Legendre under the uniform density 1/2 on [-1,1].
enum class Family { hermite, legendre };

std::string_view to_string(Family f);
Family family_from_string(std::string_view name);

struct GermSpec {
  std::vector<Family> families;

  std::size_t dimension() const { return families.size(); }
  static GermSpec uniform(std::size_t m, Family f) { return GermSpec{std::vector<Family>(m, f)}; }
};

/// Off-diagonal Jacobi coefficient: xi*psi_n = b_{n+1} psi_{n+1} + b_n psi_{n-1}.
double jacobi_offdiag(Family f, int n);

/// Orthonormal polynomial psi_n(xi) by the three-term recurrence.
double eval_orthonormal_1d(Family f, int degree, double xi);

/// psi_0..psi_max_degree at xi, written to out (size max_degree+1).
void eval_orthonormal_upto(Family f, int max_degree, double xi, std::span<double> out);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to 1 (probability measure)
};

/// Gauss rule for the family's probability weight (Golub-Welsch), exact up to
/// degree 2n-1. Rules are built once and cached.
const GaussRule& gauss_rule(Family f, int n_points);

/// E[psi_{d0} psi_{d1} ... ] for 2..4 degrees in one dimension.
double product_expectation(Family f, std::span<const int> degrees);

struct MultiIndex {
  std::vector<int> alpha;

  int total_degree() const;
  std::size_t size() const { return alpha.size(); }
  int operator[](std::size_t i) const { return alpha[i]; }
  bool is_zero() const { return total_degree() == 0; }
  bool operator==(const MultiIndex&) const = default;
};

/// Truncated multi-index set, graded lexicographic with the zero index first.
struct MultiIndexSet {
  std::vector<MultiIndex> indices;
  std::size_t dim = 0;
  int p = 0;
  double q = 1.0;

  std::size_t size() const { return indices.size(); }
  const MultiIndex& operator[](std::size_t i) const { return indices[i]; }
  int max_degree() const;
  /// Largest degree used in dimension i.
  int max_degree_in(std::size_t i) const;
};

/// (M+p)! / (M! p!), throws std::overflow_error beyond 64 bits.
std::size_t total_degree_cardinality(std::size_t m, int p);

MultiIndexSet total_degree_set(std::size_t m, int p);

/// All alpha with (sum alpha_i^q)^(1/q) <= p; q = 1 gives total_degree_set.
MultiIndexSet hyperbolic_set(std::size_t m, int p, double q);

/// q-quasi-norm of a multi-index.
double q_norm(const MultiIndex& a, double q);

}  // namespace fracpce
