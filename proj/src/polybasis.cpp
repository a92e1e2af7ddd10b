#include "fracpce/polybasis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace fracpce {

std::string_view to_string(Family f) { return f == Family::hermite ? "hermite" : "legendre"; }

Family family_from_string(std::string_view name) {
  if (name == "hermite") return Family::hermite;
  if (name == "legendre") return Family::legendre;
  throw std::invalid_argument("unknown polynomial family '" + std::string(name) + "'");
}

double jacobi_offdiag(Family f, int n) {
  if (n <= 0) return 0.0;
  const double dn = n;
  if (f == Family::hermite) return std::sqrt(dn);
  return dn / std::sqrt(4.0 * dn * dn - 1.0);
}

double eval_orthonormal_1d(Family f, int degree, double xi) {
  if (degree < 0) throw std::invalid_argument("eval_orthonormal_1d: negative degree");
  double prev = 0.0;
  double cur = 1.0;
  for (int n = 0; n < degree; ++n) {
    const double next = (xi * cur - jacobi_offdiag(f, n) * prev) / jacobi_offdiag(f, n + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

void eval_orthonormal_upto(Family f, int max_degree, double xi, std::span<double> out) {
  out[0] = 1.0;
  if (max_degree == 0) return;
  out[1] = xi / jacobi_offdiag(f, 1);
  for (int n = 1; n < max_degree; ++n)
    out[n + 1] = (xi * out[n] - jacobi_offdiag(f, n) * out[n - 1]) / jacobi_offdiag(f, n + 1);
}

namespace {

GaussRule build_rule(Family f, int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    j(k, k - 1) = jacobi_offdiag(f, k);
    j(k - 1, k) = j(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(j);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    // Symmetric weights: snap the middle node of odd rules to zero.
    double x = eig.eigenvalues()(k);
    if (n % 2 == 1 && k == n / 2) x = 0.0;
    rule.nodes[k] = x;
    rule.weights[k] = eig.eigenvectors()(0, k) * eig.eigenvectors()(0, k);
  }
  const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  for (double& w : rule.weights) w /= total;
  return rule;
}

}  // namespace

const GaussRule& gauss_rule(Family f, int n_points) {
  if (n_points < 1) throw std::invalid_argument("gauss_rule: need at least one point");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{static_cast<int>(f), n_points}];
  if (!slot) slot = std::make_unique<GaussRule>(build_rule(f, n_points));
  return *slot;
}

double product_expectation(Family f, std::span<const int> degrees) {
  if (degrees.size() < 2 || degrees.size() > 4)
    throw std::invalid_argument("product_expectation: expects 2 to 4 degrees");
  if (degrees.size() == 2) return degrees[0] == degrees[1] ? 1.0 : 0.0;
  const int sum = std::accumulate(degrees.begin(), degrees.end(), 0);
  if (sum % 2 == 1) return 0.0;  // both weights are symmetric
  const int max_deg = *std::max_element(degrees.begin(), degrees.end());
  const int n_points = std::max(1, (sum + 2) / 2);
  const GaussRule& rule = gauss_rule(f, n_points);
  std::vector<double> psi(max_deg + 1);
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    eval_orthonormal_upto(f, max_deg, rule.nodes[k], psi);
    double prod = rule.weights[k];
    for (int d : degrees) prod *= psi[d];
    acc += prod;
  }
  return acc;
}

int MultiIndex::total_degree() const { return std::accumulate(alpha.begin(), alpha.end(), 0); }

int MultiIndexSet::max_degree() const {
  int m = 0;
  for (const auto& a : indices) m = std::max(m, a.total_degree());
  return m;
}

int MultiIndexSet::max_degree_in(std::size_t i) const {
  int m = 0;
  for (const auto& a : indices) m = std::max(m, a[i]);
  return m;
}

std::size_t total_degree_cardinality(std::size_t m, int p) {
  if (p < 0) throw std::invalid_argument("total_degree_cardinality: negative degree");
  // C(m+p, p) built incrementally; each partial product is itself a binomial.
  __extension__ using u128 = unsigned __int128;
  u128 c = 1;
  for (int k = 1; k <= p; ++k) {
    c = c * (m + static_cast<unsigned>(k)) / static_cast<unsigned>(k);
    if (c > std::numeric_limits<std::size_t>::max())
      throw std::overflow_error("multi-index set cardinality overflows");
  }
  return static_cast<std::size_t>(c);
}

namespace {

// Compositions of `degree` into m parts, first component descending.
void compositions(std::size_t m, int degree, std::size_t pos, std::vector<int>& cur, std::vector<MultiIndex>& out) {
  if (pos + 1 == m) {
    cur[pos] = degree;
    out.push_back(MultiIndex{cur});
    return;
  }
  for (int v = degree; v >= 0; --v) {
    cur[pos] = v;
    compositions(m, degree - v, pos + 1, cur, out);
  }
}

constexpr std::size_t kMaxSetSize = 50'000'000;

}  // namespace

MultiIndexSet total_degree_set(std::size_t m, int p) {
  if (m < 1) throw std::invalid_argument("total_degree_set: dimension must be >= 1");
  if (p < 0) throw std::invalid_argument("total_degree_set: degree must be >= 0");
  const std::size_t card = total_degree_cardinality(m, p);
  if (card > kMaxSetSize) throw std::overflow_error("total_degree_set: cardinality too large");
  MultiIndexSet set;
  set.dim = m;
  set.p = p;
  set.q = 1.0;
  set.indices.reserve(card);
  std::vector<int> cur(m, 0);
  for (int d = 0; d <= p; ++d) compositions(m, d, 0, cur, set.indices);
  return set;
}

double q_norm(const MultiIndex& a, double q) {
  double s = 0.0;
  for (int v : a.alpha)
    if (v > 0) s += std::pow(static_cast<double>(v), q);
  return std::pow(s, 1.0 / q);
}

MultiIndexSet hyperbolic_set(std::size_t m, int p, double q) {
  if (!(q > 0.0 && q <= 1.0)) throw std::domain_error("hyperbolic_set: q must lie in (0,1]");
  MultiIndexSet full = total_degree_set(m, p);
  if (q == 1.0) return full;
  MultiIndexSet set;
  set.dim = m;
  set.p = p;
  set.q = q;
  const double limit = p * (1.0 + 1e-12);
  for (auto& a : full.indices)
    if (q_norm(a, q) <= limit) set.indices.push_back(std::move(a));
  return set;
}

}  // namespace fracpce
