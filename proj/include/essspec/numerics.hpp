#pragma once

// Dense complex linear algebra: eigenvalues by Hessenberg reduction and
// shifted QR, polynomial roots, LU determinant.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "essspec/error.hpp"

namespace essspec {

using complex = std::complex<double>;

/// Square dense matrix, row-major.
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}
  ComplexMatrix(std::size_t n, std::vector<complex> row_major);
  static ComplexMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * n_ + c]; }
  complex operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * n_ + c]; }
  std::span<complex> row(std::size_t r) noexcept { return {data_.data() + r * n_, n_}; }
  std::span<const complex> row(std::size_t r) const noexcept { return {data_.data() + r * n_, n_}; }
  const std::vector<complex>& data() const noexcept { return data_; }

  double frobenius_norm() const;
  /// Σ |m_ij|; bounds |m_ii| + |m_jj| for every pair.
  double entrywise_l1_norm() const;
  bool all_finite() const;
  complex trace() const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

private:
  std::size_t n_ = 0;
  std::vector<complex> data_;
};

struct EigenOptions {
  /// Deflate when |h_{i+1,i}| ≤ qr_tol·(|h_ii| + |h_{i+1,i+1}|).
  double qr_tol = 1e-12;
  /// One Parlett–Reinsch diagonal scaling pass before reduction.
  bool balance = true;
  /// Sweep budget per unit of dimension.
  int max_sweeps_per_dim = 40;
};

struct EigenResult {
  std::vector<complex> eigenvalues;
  int iterations = 0;
  bool converged = false;
  /// Largest subdiagonal magnitude discarded at deflation.
  double max_offdiag_residual = 0.0;
  /// Entrywise ℓ1 norm of the (balanced) Hessenberg matrix.
  double matrix_norm = 0.0;
};

/// All eigenvalues of M. On an exhausted sweep budget, returns the
/// eigenvalues deflated so far plus the diagonal of the unreduced block,
/// with converged = false. Throws Error on non-finite input.
EigenResult eigenvalues(const ComplexMatrix& M, const EigenOptions& opts = {});

/// Determinant by LU with partial pivoting.
complex determinant(const ComplexMatrix& M);
/// Inverse by LU with partial pivoting; throws Error if singular.
ComplexMatrix inverse(const ComplexMatrix& M);

/// Roots of Σ c_k λ^(deg-k) (coefficients high-to-low). Leading zeros are
/// stripped. Degree 1 is solved directly, degree 2 by the stable quadratic
/// formula, higher degrees by companion-matrix eigenvalues polished with one
/// Newton step. Throws Error for the zero or a constant polynomial.
std::vector<complex> poly_roots(std::span<const complex> coeffs);

/// Both roots of a λ² + b λ + c (a ≠ 0): the larger-magnitude root from
/// the formula with no cancellation, the other from the product c/a.
std::array<complex, 2> quadratic_roots(complex a, complex b, complex c);

/// Companion-matrix route for any degree ≥ 1 (used to cross-check the
/// quadratic formula).
std::vector<complex> companion_roots(std::span<const complex> coeffs);

/// Σ c_k r^(deg-k) by Horner.
complex poly_eval(std::span<const complex> coeffs, complex r);
/// |p(r)| / Σ |c_k||r|^(deg-k).
double relative_residual(std::span<const complex> coeffs, complex r);

/// Pairs the two multisets (equal sizes) by the assignment minimising
/// Σ |a_k - b_σ(k)| (Hungarian method) and returns max_k |a_k - b_σ(k)|.
double match_distance(std::span<const complex> a, std::span<const complex> b);

}  // namespace essspec
