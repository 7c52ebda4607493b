#include "essspec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace essspec {

ComplexMatrix::ComplexMatrix(std::size_t n, std::vector<complex> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n * n) throw Error("ComplexMatrix: data size does not match n*n");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = 1.0;
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexMatrix::entrywise_l1_norm() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::abs(v);
  return s;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

complex ComplexMatrix::trace() const {
  complex t{};
  for (std::size_t k = 0; k < n_; ++k) t += (*this)(k, k);
  return t;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.n_ != b.n_) throw Error("ComplexMatrix: dimension mismatch");
  const std::size_t n = a.n_;
  ComplexMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const complex aik = a(i, k);
      if (aik == complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.n_ != b.n_) throw Error("ComplexMatrix: dimension mismatch");
  ComplexMatrix r = a;
  for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] += b.data_[k];
  return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.n_ != b.n_) throw Error("ComplexMatrix: dimension mismatch");
  ComplexMatrix r = a;
  for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] -= b.data_[k];
  return r;
}

namespace {

double abs1(complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

void balance_once(ComplexMatrix& a) {
  constexpr double radix = 2.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    double c = 0.0, r = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      c += abs1(a(j, i));
      r += abs1(a(i, j));
    }
    if (c == 0.0 || r == 0.0) continue;
    const double s = c + r;
    double f = 1.0;
    double g = r / radix;
    while (c < g) {
      f *= radix;
      c *= radix * radix;
    }
    g = r * radix;
    while (c > g) {
      f /= radix;
      c /= radix * radix;
    }
    if ((c + r) / f < 0.95 * s) {
      for (std::size_t j = 0; j < n; ++j) a(i, j) /= f;
      for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
    }
  }
}

// A ← Q* A Q with Q a product of Householder reflectors, leaving A upper
// Hessenberg.
void reduce_to_hessenberg(ComplexMatrix& a) {
  const std::size_t n = a.size();
  if (n < 3) return;
  std::vector<complex> v(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(a(i, k));
    const double xnorm = std::sqrt(xnorm2);
    const double tail = xnorm2 - std::norm(a(k + 1, k));
    if (xnorm == 0.0 || tail == 0.0) continue;

    const complex x0 = a(k + 1, k);
    const complex phase = x0 == complex{} ? complex{1.0} : x0 / std::abs(x0);
    const complex alpha = -phase * xnorm;
    std::fill(v.begin(), v.end(), complex{});
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    const double vnorm = std::sqrt(vnorm2);
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

    // A ← (I - 2vv*) A on rows k+1.., columns k..
    std::fill(w.begin(), w.end(), complex{});
    for (std::size_t i = k + 1; i < n; ++i) {
      const complex vi = std::conj(v[i]);
      const auto row = a.row(i);
      for (std::size_t j = k; j < n; ++j) w[j] += vi * row[j];
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const complex s = 2.0 * v[i];
      auto row = a.row(i);
      for (std::size_t j = k; j < n; ++j) row[j] -= s * w[j];
    }
    // A ← A (I - 2vv*) on all rows, columns k+1..
    for (std::size_t i = 0; i < n; ++i) {
      auto row = a.row(i);
      complex s{};
      for (std::size_t j = k + 1; j < n; ++j) s += row[j] * v[j];
      s *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) row[j] -= s * std::conj(v[j]);
    }
    a(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = complex{};
  }
}

std::array<complex, 2> eig2x2(complex a, complex b, complex c, complex d) {
  const complex mean = 0.5 * (a + d);
  const complex half_diff = 0.5 * (a - d);
  complex s = std::sqrt(half_diff * half_diff + b * c);
  if ((std::conj(mean) * s).real() < 0.0) s = -s;
  const complex l1 = mean + s;
  const complex det = a * d - b * c;
  const complex l2 = l1 == complex{} ? mean - s : det / l1;
  return {l1, l2};
}

// Eigenvalue of the trailing 2×2 block closest to its (2,2) entry.
complex wilkinson_shift(complex a, complex b, complex c, complex d) {
  const auto [l1, l2] = eig2x2(a, b, c, d);
  return std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
}

struct Givens {
  double c;
  complex s;
};

Givens make_givens(complex f, complex g) {
  if (g == complex{}) return {1.0, complex{}};
  if (f == complex{}) return {0.0, complex{1.0}};
  const double af = std::abs(f);
  const double rho = std::hypot(af, std::abs(g));
  return {af / rho, (f / af) * std::conj(g) / rho};
}

}  // namespace

EigenResult eigenvalues(const ComplexMatrix& M, const EigenOptions& opts) {
  const std::size_t n = M.size();
  if (n == 0) throw Error("eigenvalues: empty matrix");
  if (!M.all_finite()) throw Error("eigenvalues: non-finite matrix entries");

  ComplexMatrix h = M;
  if (opts.balance) balance_once(h);
  reduce_to_hessenberg(h);

  EigenResult res;
  res.matrix_norm = h.entrywise_l1_norm();
  res.eigenvalues.resize(n);
  const int max_iter = opts.max_sweeps_per_dim * static_cast<int>(n);
  std::vector<Givens> rot(n);

  long hi = static_cast<long>(n) - 1;
  int its = 0;
  while (hi >= 0) {
    // Locate the start of the unreduced block ending at hi.
    long lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      double ref = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      if (ref == 0.0) {
        for (long i = lo - 1; i <= hi; ++i)
          for (long j = std::max(lo - 1, i - 1); j <= hi; ++j) ref += std::abs(h(i, j));
      }
      if (sub <= opts.qr_tol * ref) {
        res.max_offdiag_residual = std::max(res.max_offdiag_residual, sub);
        h(lo, lo - 1) = complex{};
        break;
      }
      --lo;
    }

    if (lo == hi) {
      res.eigenvalues[hi] = h(hi, hi);
      --hi;
      its = 0;
      continue;
    }
    if (lo == hi - 1) {
      const auto [l1, l2] = eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
      res.eigenvalues[lo] = l1;
      res.eigenvalues[hi] = l2;
      hi -= 2;
      its = 0;
      continue;
    }
    if (res.iterations >= max_iter) {
      for (long k = 0; k <= hi; ++k) res.eigenvalues[k] = h(k, k);
      res.converged = false;
      return res;
    }

    complex mu;
    if (its > 0 && its % 10 == 0) {
      // Exceptional shift to break cycles.
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1).real()) + complex{0.0, 0.4375} * std::abs(h(hi, hi - 1));
    } else {
      mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    for (long k = lo; k <= hi; ++k) h(k, k) -= mu;
    // H - μI = QR: left rotations give R.
    for (long k = lo; k < hi; ++k) {
      const Givens g = make_givens(h(k, k), h(k + 1, k));
      rot[k] = g;
      auto rk = h.row(k);
      auto rk1 = h.row(k + 1);
      for (long j = k; j <= hi; ++j) {
        const complex x = rk[j];
        const complex y = rk1[j];
        rk[j] = g.c * x + g.s * y;
        rk1[j] = -std::conj(g.s) * x + g.c * y;
      }
      h(k + 1, k) = complex{};
    }
    // RQ: right rotations restore Hessenberg form.
    for (long k = lo; k < hi; ++k) {
      const Givens g = rot[k];
      const long last = std::min(k + 1, hi);
      for (long i = lo; i <= last; ++i) {
        const complex x = h(i, k);
        const complex y = h(i, k + 1);
        h(i, k) = x * g.c + y * std::conj(g.s);
        h(i, k + 1) = -x * g.s + y * g.c;
      }
    }
    for (long k = lo; k <= hi; ++k) h(k, k) += mu;

    ++its;
    ++res.iterations;
  }
  res.converged = true;
  return res;
}

namespace {

struct LU {
  ComplexMatrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;
};

LU lu_decompose(const ComplexMatrix& m) {
  LU f{m, {}, 1, false};
  const std::size_t n = m.size();
  f.perm.resize(n);
  for (std::size_t k = 0; k < n; ++k) f.perm[k] = k;
  auto& a = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == complex{}) {
      f.singular = true;
      continue;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const complex l = a(i, k) / a(k, k);
      a(i, k) = l;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return f;
}

}  // namespace

complex determinant(const ComplexMatrix& M) {
  const LU f = lu_decompose(M);
  if (f.singular) return {};
  complex det{static_cast<double>(f.sign)};
  for (std::size_t k = 0; k < M.size(); ++k) det *= f.lu(k, k);
  return det;
}

ComplexMatrix inverse(const ComplexMatrix& M) {
  const LU f = lu_decompose(M);
  if (f.singular) throw Error("inverse: singular matrix");
  const std::size_t n = M.size();
  ComplexMatrix inv(n);
  std::vector<complex> col(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) col[i] = f.perm[i] == c ? 1.0 : 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) col[i] -= f.lu(i, j) * col[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) col[i] -= f.lu(i, j) * col[j];
      col[i] /= f.lu(i, i);
    }
    for (std::size_t i = 0; i < n; ++i) inv(i, c) = col[i];
  }
  return inv;
}

complex poly_eval(std::span<const complex> coeffs, complex r) {
  complex acc{};
  for (const complex c : coeffs) acc = acc * r + c;
  return acc;
}

double relative_residual(std::span<const complex> coeffs, complex r) {
  double scale = 0.0;
  const double ar = std::abs(r);
  for (const complex c : coeffs) scale = scale * ar + std::abs(c);
  const double res = std::abs(poly_eval(coeffs, r));
  return scale == 0.0 ? res : res / scale;
}

std::array<complex, 2> quadratic_roots(complex a, complex b, complex c) {
  if (a == complex{}) throw Error("quadratic_roots: leading coefficient is zero");
  complex s = std::sqrt(b * b - 4.0 * a * c);
  // Pick the sign that adds magnitudes in b + s.
  if ((std::conj(b) * s).real() < 0.0) s = -s;
  const complex q = -0.5 * (b + s);
  if (q == complex{}) return {complex{}, complex{}};
  return {q / a, c / q};
}

namespace {

std::span<const complex> strip_leading_zeros(std::span<const complex> coeffs) {
  std::size_t k = 0;
  while (k < coeffs.size() && coeffs[k] == complex{}) ++k;
  return coeffs.subspan(k);
}

complex newton_polish(std::span<const complex> coeffs, complex r) {
  complex p{}, dp{};
  for (const complex c : coeffs) {
    dp = dp * r + p;
    p = p * r + c;
  }
  if (dp == complex{}) return r;
  const complex candidate = r - p / dp;
  return std::abs(poly_eval(coeffs, candidate)) < std::abs(p) ? candidate : r;
}

}  // namespace

std::vector<complex> companion_roots(std::span<const complex> coeffs) {
  const auto c = strip_leading_zeros(coeffs);
  if (c.empty()) throw Error("poly_roots: zero polynomial");
  const std::size_t deg = c.size() - 1;
  if (deg == 0) throw Error("poly_roots: degree 0 polynomial has no roots");
  ComplexMatrix comp(deg);
  for (std::size_t j = 0; j < deg; ++j) comp(0, j) = -c[j + 1] / c[0];
  for (std::size_t i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  const EigenResult eig = eigenvalues(comp);
  std::vector<complex> roots = eig.eigenvalues;
  for (auto& r : roots) r = newton_polish(c, r);
  return roots;
}

std::vector<complex> poly_roots(std::span<const complex> coeffs) {
  const auto c = strip_leading_zeros(coeffs);
  if (c.empty()) throw Error("poly_roots: zero polynomial");
  switch (c.size()) {
    case 1: throw Error("poly_roots: degree 0 polynomial has no roots");
    case 2: return {-c[1] / c[0]};
    case 3: {
      const auto r = quadratic_roots(c[0], c[1], c[2]);
      return {r[0], r[1]};
    }
    default: return companion_roots(c);
  }
}

double match_distance(std::span<const complex> a, std::span<const complex> b) {
  if (a.size() != b.size()) throw Error("match_distance: size mismatch");
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  // Hungarian algorithm (potentials, 1-based rows/columns).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1), v(n + 1), minv(n + 1);
  std::vector<std::size_t> p(n + 1), way(n + 1);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = std::abs(a[i0 - 1] - b[j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double worst = 0.0;
  for (std::size_t j = 1; j <= n; ++j) worst = std::max(worst, std::abs(a[p[j] - 1] - b[j - 1]));
  return worst;
}

}  // namespace essspec
