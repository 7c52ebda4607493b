#include "essspec/poly.hpp"

#include <algorithm>

namespace essspec {

complex times_i_pow(complex c, int j) {
  switch (((j % 4) + 4) % 4) {
    case 0: return c;
    case 1: return {-c.imag(), c.real()};
    case 2: return {-c.real(), -c.imag()};
    default: return {c.imag(), -c.real()};
  }
}

complex i_xi_pow(double xi, int j) {
  double r = 1.0;
  for (int k = 0; k < j; ++k) r *= xi;
  return times_i_pow(complex{r}, j);
}

Poly::Poly(std::vector<complex> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(complex c, int power) {
  std::vector<complex> v(static_cast<std::size_t>(power) + 1);
  v.back() = c;
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == complex{}) coeffs_.pop_back();
}

complex Poly::coeff(int j) const noexcept {
  if (j < 0 || j > degree()) return {};
  return coeffs_[static_cast<std::size_t>(j)];
}

complex Poly::at_xi(double xi) const {
  complex sum{};
  double xi_pow = 1.0;
  for (int j = 0; j <= degree(); ++j) {
    sum += times_i_pow(coeffs_[j], j) * xi_pow;
    xi_pow *= xi;
  }
  return sum;
}

complex Poly::derivative_at_xi(double xi) const {
  // d/dξ (iξ)^j = j·i·(iξ)^(j-1)
  complex sum{};
  double xi_pow = 1.0;
  for (int j = 1; j <= degree(); ++j) {
    sum += times_i_pow(coeffs_[j], j) * (static_cast<double>(j) * xi_pow);
    xi_pow *= xi;
  }
  return sum;
}

complex Poly::at_z(complex z) const {
  complex acc{};
  for (int j = degree(); j >= 0; --j) acc = acc * z + coeffs_[j];
  return acc;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<complex> v(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.coeff(int(k)) + b.coeff(int(k));
  return Poly(std::move(v));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<complex> v(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t j = 0; j < a.coeffs_.size(); ++j)
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) v[j + k] += a.coeffs_[j] * b.coeffs_[k];
  return Poly(std::move(v));
}

Poly operator*(complex s, const Poly& a) {
  std::vector<complex> v = a.coeffs_;
  for (auto& c : v) c *= s;
  return Poly(std::move(v));
}

}  // namespace essspec
