#pragma once

// Differential symbols σ(x,ξ) = Σ_j c_j(x)(iξ)^j with asymptotically
// constant coefficients, and the 2×2 operator matrix built from them.
//
// Throughout, an x argument equal to ±infinity selects the limiting
// coefficients (x → ±∞); both tails share one limit.

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "essspec/expr.hpp"
#include "essspec/poly.hpp"

namespace essspec {

/// Order assigned to the identically-zero symbol (stands in for -∞).
inline constexpr int kZeroOrder = -1'000'000;

/// One coefficient function c(x) = limit + perturbation(x), where the
/// perturbation decays as |x| → ∞. Parameters are bound at construction.
class CoeffFn {
public:
  CoeffFn() = default;
  CoeffFn(complex limit) : limit_(limit) {}  // NOLINT: constants convert implicitly
  CoeffFn(complex limit, Expr perturbation, ParamMap params = {});

  complex limit() const noexcept { return limit_; }
  const std::optional<Expr>& perturbation() const noexcept { return perturbation_; }
  const ParamMap& params() const noexcept;

  bool is_constant() const noexcept { return !perturbation_.has_value(); }
  bool is_identically_zero() const noexcept { return is_constant() && limit_ == complex{}; }

  /// c(x); the limit when x is infinite.
  complex value(double x) const;
  /// c(x) - limit, evaluated from the perturbation expression directly.
  complex perturbation_at(double x) const;
  /// max(|perturbation(-x_far)|, |perturbation(x_far)|); 0 when constant.
  double tail(double x_far) const;

private:
  complex limit_{};
  std::optional<Expr> perturbation_;
  std::shared_ptr<const ParamMap> params_;
};

/// Differential symbol with coefficient list indexed by power of (iξ).
/// Trailing identically-zero coefficients are dropped, so the order is
/// inferred from the data; an empty list is the ZERO symbol.
class DiffSymbol {
public:
  DiffSymbol() = default;
  explicit DiffSymbol(std::vector<CoeffFn> coeffs);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  int order() const noexcept { return is_zero() ? kZeroOrder : static_cast<int>(coeffs_.size()) - 1; }
  std::span<const CoeffFn> coeffs() const noexcept { return coeffs_; }
  const CoeffFn& coeff(int j) const { return coeffs_.at(static_cast<std::size_t>(j)); }
  bool is_constant() const noexcept;

  /// Leading coefficient c_order(x). Throws on ZERO.
  complex leading(double x) const;
  /// Polynomial in iξ obtained by replacing every coefficient by its limit.
  Poly limit_poly() const;

private:
  std::vector<CoeffFn> coeffs_;
};

complex eval_symbol(const DiffSymbol& s, double x, double xi);
/// c_order(x)·(iξ)^order. Throws Error("no principal symbol") on ZERO.
complex principal_symbol(const DiffSymbol& s, double x, double xi);
/// Σ_j (c_j(x) - c_j,∞)(iξ)^j, evaluated without subtracting the limit.
complex eval_perturbation(const DiffSymbol& s, double x, double xi);

enum class Entry { A, B, C, D };
inline constexpr std::array<Entry, 4> kEntries{Entry::A, Entry::B, Entry::C, Entry::D};
const char* entry_name(Entry e) noexcept;

/// Order regimes of a 2×2 system: m+q > n+p, m+q = n+p, m+q < n+p.
enum class OrderCase { Diag, Balanced, OffDiag };
const char* case_name(OrderCase c) noexcept;

/// T0 = [[Ta, Tb], [Tc, Td]] with orders m, n, p, q inferred from the
/// entries. Construction enforces m ≥ q > 0 and non-ZERO diagonal entries.
class OperatorMatrix {
public:
  OperatorMatrix(DiffSymbol a, DiffSymbol b, DiffSymbol c, DiffSymbol d);

  const DiffSymbol& a() const noexcept { return a_; }
  const DiffSymbol& b() const noexcept { return b_; }
  const DiffSymbol& c() const noexcept { return c_; }
  const DiffSymbol& d() const noexcept { return d_; }
  const DiffSymbol& entry(Entry e) const noexcept;

  int m() const noexcept { return a_.order(); }
  int n() const noexcept { return b_.order(); }
  int p() const noexcept { return c_.order(); }
  int q() const noexcept { return d_.order(); }

  int diag_order() const noexcept { return m() + q(); }
  /// n + p, or kZeroOrder when either off-diagonal entry is ZERO.
  int offdiag_order() const noexcept;
  /// κ = max{m+q, n+p}.
  int kappa() const noexcept;
  OrderCase order_case() const noexcept;
  bool is_constant() const noexcept;

private:
  DiffSymbol a_, b_, c_, d_;
};

/// M_∞(ξ): each entry as a polynomial in iξ with limiting coefficients.
struct LimitingMatrix {
  Poly a, b, c, d;

  const Poly& entry(Entry e) const noexcept;
  /// Entries evaluated at ξ, row-major.
  std::array<complex, 4> at_xi(double xi) const;
};

LimitingMatrix limiting_matrix(const OperatorMatrix& T);

/// det of the principal symbol matrix: a_m d_q - b_n c_p (ZERO entries give 0).
complex det_M(const OperatorMatrix& T, double x, double xi);

/// Rejects coefficients whose perturbation does not decay:
/// |perturbation(±x_far)| must not exceed decay_tol.
void check_decay(const OperatorMatrix& T, double x_far, double decay_tol);

}  // namespace essspec
