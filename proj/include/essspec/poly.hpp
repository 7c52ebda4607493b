#pragma once

#include <complex>
#include <vector>

namespace essspec {

using complex = std::complex<double>;

/// (iξ)^j computed as i^j·ξ^j, so that values at -ξ are exact conjugates.
complex i_xi_pow(double xi, int j);

/// c·i^j, exact (a rotation of the components).
complex times_i_pow(complex c, int j);

/// Univariate complex polynomial in z = iξ. Coefficients are stored
/// low-to-high; trailing zeros are trimmed so degree() is exact.
class Poly {
public:
  Poly() = default;
  explicit Poly(std::vector<complex> coeffs);
  static Poly monomial(complex c, int power);

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  complex coeff(int j) const noexcept;
  const std::vector<complex>& coeffs() const noexcept { return coeffs_; }

  /// Σ c_j (iξ)^j.
  complex at_xi(double xi) const;
  /// d/dξ of at_xi.
  complex derivative_at_xi(double xi) const;
  /// Σ c_j z^j by Horner's rule.
  complex at_z(complex z) const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(complex s, const Poly& a);
  friend bool operator==(const Poly& a, const Poly& b) = default;

private:
  void trim();
  std::vector<complex> coeffs_;
};

}  // namespace essspec
