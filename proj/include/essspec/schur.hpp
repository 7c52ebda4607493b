#pragma once

// Schur-complement symbols of the operator matrix, the limiting spectral
// pencil P(λ,ξ) = det(M_∞(ξ) - λI), the stabilization metric, exceptional
// sets, and the numerical-range criterion that empties the exceptional set
// for the falling-film template.

#include <array>
#include <vector>

#include "essspec/symbols.hpp"

namespace essspec {

enum class SchurKind {
  First,   ///< Ta - λ - Tb (Td - λ)^-1 Tc
  Second,  ///< Td - λ - Tc (Ta - λ)^-1 Tb
};

/// P(λ,ξ) = λ² + A(ξ)λ + B(ξ), with A = -(a∞+d∞) and B = a∞d∞ - b∞c∞ as
/// polynomials in iξ.
struct SpectralPencil {
  Poly A;
  Poly B;

  complex at(complex lam, double xi) const;
  /// {1, A(ξ), B(ξ)}: coefficients in λ, high-to-low.
  std::array<complex, 3> lambda_coeffs(double xi) const;
  /// |λ|² + |A(ξ)||λ| + |B(ξ)|, the natural scale of P at (λ,ξ).
  double scale(complex lam, double xi) const;
};

/// Pointwise Schur symbol. At x = ±∞ the limiting polynomials are used,
/// which is exact for constant coefficients; at finite x the zeroth-order
/// composition is used. Throws PoleError if the resolvent denominator is
/// within pole_tol of zero (never when b or c is ZERO).
complex schur_symbol(const OperatorMatrix& T, SchurKind which, complex lam, double x, double xi,
                     double pole_tol = 1e-12);

/// λ-independent principal symbol of the first Schur complement, of order
/// κ - q: a_m (m+q > n+p), a_m - b_n c_p/d_q (balanced), -b_n c_p/d_q
/// (m+q < n+p).
complex principal_schur_symbol(const OperatorMatrix& T, double x, double xi, double pole_tol = 1e-12);

SpectralPencil build_pencil(const LimitingMatrix& L);

/// Rebuilds the pencil from the limiting Schur symbol alone: samples
/// (den - λ)·S(λ) at three λ on a circle and at Chebyshev nodes in ξ,
/// then recovers the coefficients by interpolation. An independent route
/// to build_pencil.
SpectralPencil pencil_from_schur(const OperatorMatrix& T, SchurKind which);

/// {0} ∪ ±log-spaced |ξ| in [1e-3, 1e3].
std::vector<double> default_stabilization_grid(int points_per_side = 200);

/// 1 + max(1, 2·max_{|ξ|≤1}|d∞(ξ)|), shifted right of the sampled curve
/// {d∞(ξ)} so that the resolvent stays bounded.
complex default_probe(const OperatorMatrix& T, const std::vector<double>& xi_grid);

/// sup over xi_grid of ⟨ξ⟩^(q-κ)·|σ¹_λ(x,ξ) - σ¹_λ,∞(ξ)|. The difference is
/// formed from the perturbations directly, so decayed tails are not lost
/// to cancellation. Throws PoleError if lam is within pole_guard of
/// {d∞(ξ)} or {d(x,ξ)} on the grid.
double stabilization_metric(const OperatorMatrix& T, complex lam, double x,
                            const std::vector<double>& xi_grid, double pole_guard = 0.5);

struct LambdaPoint {
  complex lambda;
  double xi_a = 0.0;  ///< witness: a∞(xi_a) ≈ lambda
  double xi_d = 0.0;  ///< witness: d∞(xi_d) ≈ lambda
  double residual = 0.0;
  /// The intersection system is (nearly) singular here: the curves touch
  /// tangentially or one of them turns back on itself.
  bool tangential = false;
};

/// Sampled essential spectra of the limiting diagonal entries and their
/// refined intersection points.
struct ExceptionalSet {
  Poly poly_a;  ///< a∞ in iξ
  Poly poly_d;  ///< d∞ in iξ
  std::vector<complex> curve_a;
  std::vector<complex> curve_d;
  std::vector<LambdaPoint> lambda_set;
};

struct ExceptionalOptions {
  double coarse_tol = 1e-2;
  double refine_tol = 1e-10;
  /// false: sample the curves only (when Λ = ∅ is already known).
  bool search = true;
};

ExceptionalSet exceptional_sets(const LimitingMatrix& L, const std::vector<double>& xi_grid,
                                const ExceptionalOptions& opts = {});

struct OmegaReport {
  double omega1 = 0.0;  ///< -sup Re φ0
  double omega2 = 0.0;  ///< sup |φ1|
  double bound = 0.0;   ///< sqrt(2·κ2·omega1), κ2 the leading coefficient of Ta
  bool holds = false;
};

/// For Ta = κ2 D² + φ1 D + φ0 with constant real κ2 > 0 and real φ0:
/// omega1 > 0 and omega2 < bound place σ(Ta) in the open left half-plane,
/// so σ(Ta) ∩ iℝ is empty. Suprema run over x_grid and x → ∞. Throws Error
/// if Ta does not have that form.
OmegaReport omega_condition(const OperatorMatrix& T, const std::vector<double>& x_grid);

}  // namespace essspec
