#pragma once

// Uniform Douglis–Nirenberg ellipticity of the operator matrix, checked on
// a finite sample of (x, ξ) plus the limits x → ∞ and |ξ| → ∞.

#include <map>
#include <string>
#include <vector>

#include "essspec/symbols.hpp"

namespace essspec {

struct GridOptions {
  double x_max = 50.0;
  int x_points = 201;
  double xi_min = 1.0;
  double xi_max = 1e3;
  int xi_points = 200;
};

/// Finite x samples and ξ samples. The limit x → ∞ and the tail |ξ| → ∞
/// are always added by the checks themselves.
struct SampleGrid {
  std::vector<double> x;
  std::vector<double> xi;

  /// Throws Error if either list is empty or holds non-finite values.
  void validate() const;
};

/// x uniform on [-x_max, x_max]; ξ = ±(log-spaced |ξ| in [xi_min, xi_max]).
SampleGrid make_sample_grid(const GridOptions& opts = {});

/// Union of two grids (used to check margin monotonicity).
SampleGrid merge(const SampleGrid& g, const SampleGrid& h);

struct EllipticityReport {
  int kappa = 0;
  OrderCase order_case = OrderCase::Diag;
  /// inf of |det M(x,ξ)|·⟨ξ⟩^-κ over the sample, x = ∞, and |ξ| → ∞.
  double dn_margin = 0.0;
  /// inf of |σ_top(x,ξ)|·⟨ξ⟩^-order for the entries the order case makes
  /// decisive (a, d when m+q > n+p; b, c when m+q < n+p).
  std::map<std::string, double> entry_margins;
  bool assumption_b_ok = false;
  bool pass = false;
};

/// pass ⇔ dn_margin ≥ margin_tol and assumption_b_ok.
EllipticityReport check_dn_ellipticity(const OperatorMatrix& T, const SampleGrid& grid,
                                       double margin_tol = 1e-8);

/// Entrywise criterion: both diagonal (m+q > n+p) or both off-diagonal
/// (m+q < n+p) entries uniformly elliptic. pass ⇔ every entry margin ≥
/// margin_tol and assumption_b_ok. Throws Error in the balanced case.
EllipticityReport check_entrywise(const OperatorMatrix& T, const SampleGrid& grid,
                                  double margin_tol = 1e-8);

/// Off-diagonal orders of opposite sign require m+q ≥ max{n,p}. ZERO
/// entries count as order ≤ 0.
bool check_assumption_b(const OperatorMatrix& T);

}  // namespace essspec
