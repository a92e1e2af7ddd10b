#include <cmath>
#include <vector>

#include "doctest.h"
#include "fracpce/kernels.hpp"
#include "fracpce/polybasis.hpp"
#include "fracpce/rng.hpp"

using namespace fracpce;
namespace k = fracpce::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  Rng r(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = scale * r.normal();
  return v;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("scalar kernels always available and active table consistent") {
  CHECK(k::available(k::Isa::scalar));
  CHECK(k::available(k::active_isa()));
  CHECK(&k::active() == &k::table(k::active_isa()));
}

TEST_CASE("scalar recurrence reproduces the orthonormal polynomials") {
  for (Family f : {Family::hermite, Family::legendre}) {
    const int deg = 9;
    std::vector<double> off(deg + 1);
    for (int d = 0; d <= deg; ++d) off[static_cast<std::size_t>(d)] = jacobi_offdiag(f, d);
    const std::size_t n = 13;
    auto xi = random_vector(n, 3, f == Family::legendre ? 0.4 : 1.5);
    std::vector<double> out((deg + 1) * n);
    k::table(k::Isa::scalar).recurrence(off.data(), deg, xi.data(), n, out.data());
    for (int d = 0; d <= deg; ++d)
      for (std::size_t j = 0; j < n; ++j)
        CHECK(close(out[static_cast<std::size_t>(d) * n + j], eval_orthonormal_1d(f, d, xi[j]), 1e-13));
  }
}

TEST_CASE("avx2 kernels match the scalar reference") {
  if (!k::available(k::Isa::avx2)) {
    MESSAGE("AVX2 kernels not available on this machine; equivalence not exercised");
    return;
  }
  const auto& s = k::table(k::Isa::scalar);
  const auto& v = k::table(k::Isa::avx2);

  // lengths straddle the vector width and its remainders
  for (std::size_t n : {0, 1, 3, 4, 5, 8, 31, 64, 1001}) {
    CAPTURE(n);
    for (Family f : {Family::hermite, Family::legendre}) {
      const int deg = 8;
      std::vector<double> off(deg + 1);
      for (int d = 0; d <= deg; ++d) off[static_cast<std::size_t>(d)] = jacobi_offdiag(f, d);
      auto xi = random_vector(n, 7 + n);
      std::vector<double> a((deg + 1) * n), b((deg + 1) * n);
      s.recurrence(off.data(), deg, xi.data(), n, a.data());
      v.recurrence(off.data(), deg, xi.data(), n, b.data());
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(close(b[i], a[i], 1e-13));
    }

    auto r0 = random_vector(n, 1), r1 = random_vector(n, 2), r2 = random_vector(n, 3);
    const double* rows[] = {r0.data(), r1.data(), r2.data()};
    for (std::size_t nr = 0; nr <= 3; ++nr) {
      std::vector<double> a(n), b(n);
      s.product_rows(rows, nr, n, a.data());
      v.product_rows(rows, nr, n, b.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(close(b[i], a[i], 1e-14));

      auto ya = random_vector(n, 9), yb = ya;
      s.accumulate_term(0.731, rows, nr, n, ya.data());
      v.accumulate_term(0.731, rows, nr, n, yb.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(close(yb[i], ya[i], 1e-14));
    }

    auto y = random_vector(n, 11, 3.0);
    for (std::size_t i = 0; i < n; i += 3) y[i] = std::abs(y[i]) + 50.0;
    if (n > 2) y[1] = 0.0;
    const auto pa = s.power_sums(y.data(), n);
    const auto pb = v.power_sums(y.data(), n);
    CHECK(pa.count == pb.count);
    CHECK(pa.nonpositive == pb.nonpositive);
    CHECK(close(pb.s1, pa.s1, 1e-12));
    CHECK(close(pb.s2, pa.s2, 1e-12));
    CHECK(close(pb.s3, pa.s3, 1e-12));
    CHECK(close(pb.s4, pa.s4, 1e-12));
    CHECK(close(pb.a1, pa.a1, 1e-12));
    CHECK(close(pb.a3, pa.a3, 1e-12));
  }
}

TEST_CASE("power sums against a direct loop") {
  const std::vector<double> y = {1.0, -2.0, 0.0, 3.5, 50.0};
  const auto p = k::active().power_sums(y.data(), y.size());
  CHECK(p.count == 5);
  CHECK(p.nonpositive == 2);
  CHECK(p.s1 == doctest::Approx(52.5));
  CHECK(p.s2 == doctest::Approx(1 + 4 + 12.25 + 2500));
  CHECK(p.s3 == doctest::Approx(1 - 8 + 42.875 + 125000));
  CHECK(p.a1 == doctest::Approx(56.5));
  CHECK(p.a3 == doctest::Approx(1 + 8 + 42.875 + 125000));
}
