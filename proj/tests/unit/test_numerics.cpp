#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "doctest.h"
#include "essspec/numerics.hpp"
#include "support.hpp"

using namespace essspec;
using testing_support::random_complex;
using testing_support::rng;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& g, std::size_t n, double scale = 1.0) {
  ComplexMatrix m(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = random_complex(g, scale);
  return m;
}

// S diag(ev) S⁻¹ with S = I + small random part (well conditioned).
ComplexMatrix similar_to(std::mt19937_64& g, const std::vector<complex>& ev) {
  const std::size_t n = ev.size();
  ComplexMatrix S = ComplexMatrix::identity(n) + random_matrix(g, n, 0.5 / std::sqrt(double(n)));
  ComplexMatrix D(n);
  for (std::size_t k = 0; k < n; ++k) D(k, k) = ev[k];
  return S * D * inverse(S);
}

double brute_match(std::vector<complex> a, const std::vector<complex>& b) {
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best_sum = std::numeric_limits<double>::infinity(), best_max = 0.0;
  do {
    double sum = 0.0, mx = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double d = std::abs(a[k] - b[perm[k]]);
      sum += d;
      mx = std::max(mx, d);
    }
    if (sum < best_sum) {
      best_sum = sum;
      best_max = mx;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best_max;
}

}  // namespace

TEST_CASE("numerics: similarity-constructed spectra are recovered") {
  auto g = rng(101);
  for (std::size_t n : {8u, 32u, 64u}) {
    std::vector<complex> ev(n);
    for (auto& z : ev) z = random_complex(g, 3.0);
    const ComplexMatrix M = similar_to(g, ev);
    const EigenResult r = eigenvalues(M);
    CAPTURE(n);
    REQUIRE(r.converged);
    REQUIRE(r.eigenvalues.size() == n);
    CHECK(match_distance(r.eigenvalues, ev) <= 1e-8);
    complex sum{};
    for (const complex z : r.eigenvalues) sum += z;
    CHECK(std::abs(sum - M.trace()) <= 1e-10 * std::max(1.0, std::abs(M.trace())));
  }
}

TEST_CASE("numerics: triangular, diagonal and tiny matrices") {
  ComplexMatrix U(5);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = r; c < 5; ++c) U(r, c) = complex(double(r + 1), double(c));
  const auto r = eigenvalues(U);
  std::vector<complex> diag;
  for (std::size_t k = 0; k < 5; ++k) diag.push_back(U(k, k));
  CHECK(match_distance(r.eigenvalues, diag) <= 1e-12);

  CHECK(eigenvalues(ComplexMatrix(1, {complex{2.0, -1.0}})).eigenvalues[0] == complex{2.0, -1.0});
  // Jordan-like block rotated: [[0,1],[-1,0]] has ±i.
  const auto rot = eigenvalues(ComplexMatrix(2, {0.0, 1.0, -1.0, 0.0})).eigenvalues;
  CHECK(match_distance(rot, std::vector<complex>{{0.0, 1.0}, {0.0, -1.0}}) <= 1e-14);
  CHECK_THROWS_AS(eigenvalues(ComplexMatrix(0)), Error);
}

TEST_CASE("numerics: badly scaled matrices benefit from balancing") {
  auto g = rng(5);
  std::vector<complex> ev{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  ComplexMatrix M = similar_to(g, ev);
  ComplexMatrix Dd(6), Di(6);
  for (std::size_t k = 0; k < 6; ++k) {
    Dd(k, k) = std::pow(1e3, double(k));
    Di(k, k) = std::pow(1e-3, double(k));
  }
  const ComplexMatrix scaled = Dd * M * Di;
  CHECK(match_distance(eigenvalues(scaled).eigenvalues, ev) <= 1e-6);
}

TEST_CASE("numerics: non-finite input is rejected") {
  ComplexMatrix M = ComplexMatrix::identity(3);
  M(1, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(eigenvalues(M), Error);
}

TEST_CASE("numerics: determinant and inverse") {
  auto g = rng(9);
  const ComplexMatrix A = random_matrix(g, 6);
  const ComplexMatrix I = A * inverse(A);
  CHECK((I - ComplexMatrix::identity(6)).frobenius_norm() <= 1e-12);
  complex prod{1.0};
  for (const complex z : eigenvalues(A).eigenvalues) prod *= z;
  CHECK(std::abs(determinant(A) - prod) <= 1e-10 * std::abs(prod));
  CHECK_THROWS_AS(inverse(ComplexMatrix(2, {1.0, 2.0, 2.0, 4.0})), Error);
}

TEST_CASE("numerics: 1000 random quadratics, companion route vs closed form") {
  auto g = rng(314);
  for (int n = 0; n < 1000; ++n) {
    const std::array<complex, 3> c{random_complex(g, 2.0), random_complex(g, 5.0), random_complex(g, 5.0)};
    const auto closed = quadratic_roots(c[0], c[1], c[2]);
    const auto comp = companion_roots(c);
    double scale = 1.0;
    for (const complex z : closed) scale = std::max(scale, std::abs(z));
    REQUIRE(match_distance(std::vector<complex>(closed.begin(), closed.end()), comp) <= 1e-12 * scale);
  }
}

TEST_CASE("numerics: quadratic formula avoids cancellation") {
  // λ² - 1e8 λ + 1: roots ≈ 1e8 and 1e-8.
  const auto r = quadratic_roots(1.0, -1e8, 1.0);
  const double small = std::min(std::abs(r[0]), std::abs(r[1]));
  CHECK(std::abs(small - 1e-8) <= 1e-22);
  const auto z = quadratic_roots(1.0, 0.0, 0.0);
  CHECK(z[0] == complex{});
  CHECK(z[1] == complex{});
}

TEST_CASE("numerics: polynomial roots of higher degree") {
  auto g = rng(77);
  for (int deg = 1; deg <= 8; ++deg) {
    std::vector<complex> roots(static_cast<std::size_t>(deg));
    for (auto& z : roots) z = random_complex(g, 2.0);
    // Expand Π (λ - r_k), high-to-low.
    std::vector<complex> c{1.0};
    for (const complex r : roots) {
      std::vector<complex> next(c.size() + 1);
      for (std::size_t k = 0; k < c.size(); ++k) {
        next[k] += c[k];
        next[k + 1] -= r * c[k];
      }
      c = next;
    }
    const auto got = poly_roots(c);
    CAPTURE(deg);
    CHECK(match_distance(got, roots) <= 1e-8);
    for (const complex z : got) CHECK(relative_residual(c, z) <= 1e-13);
  }
  CHECK_THROWS_AS(poly_roots(std::vector<complex>{0.0, 0.0}), Error);
  CHECK_THROWS_AS(poly_roots(std::vector<complex>{3.0}), Error);
  // Leading zeros are stripped.
  const auto lin = poly_roots(std::vector<complex>{0.0, 2.0, -4.0});
  REQUIRE(lin.size() == 1);
  CHECK(lin[0] == complex{2.0});
}

TEST_CASE("numerics: Hungarian matching equals brute force on small sets") {
  auto g = rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 6;
    std::vector<complex> a(n), b(n);
    for (auto& z : a) z = random_complex(g);
    for (auto& z : b) z = random_complex(g);
    CHECK(std::abs(match_distance(a, b) - brute_match(a, b)) <= 1e-14);
  }
}
