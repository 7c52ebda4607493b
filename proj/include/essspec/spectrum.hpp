#pragma once

// Traces the λ-roots of the limiting pencil over a ξ grid into two labelled
// branches, flagging points that fall on the exceptional curves.

#include <array>
#include <optional>
#include <vector>

#include "essspec/schur.hpp"

namespace essspec {

/// Axis-aligned box [re_min, re_max] × [im_min, im_max]·i.
struct Window {
  double re_min = -3.0;
  double re_max = 0.2;
  double im_min = -20.0;
  double im_max = 20.0;

  bool contains(complex z) const noexcept {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

struct RootFlags {
  /// Certified essential spectrum: off the exceptional set, and not on
  /// both exceptional curves at once.
  bool ok = true;
  bool near_sigma_d = false;
  bool near_sigma_a = false;
  bool in_lambda_set = false;
  /// Outside the window; kept in the data.
  bool clipped = false;
};

struct SpectrumSample {
  double xi = 0.0;
  std::array<complex, 2> roots{};  ///< indexed by branch
  std::array<RootFlags, 2> flags{};
};

struct SpectrumCurve {
  std::vector<SpectrumSample> samples;
  std::vector<double> xi_grid;
  std::optional<Window> window;
};

struct TraceOptions {
  double excl_tol = 1e-6;
  /// Curve-distance flags cost a small root solve per root; dense traces
  /// used only as a point cloud switch them off.
  bool compute_flags = true;
};

/// ξ_k = xi_plot·tanh(u_k), u uniform on [-3, 3]; exactly symmetric.
std::vector<double> tanh_grid(double xi_plot, int points = 2001);

/// Smallest power of two (capped at 2^16) for which all roots at both ends
/// of tanh_grid(xi_plot) lie outside the window.
double choose_xi_plot(const SpectralPencil& pencil, const Window& window);

/// Distance from z to the curve {p(ξ) : ξ ∈ ℝ}, from the real critical
/// points of |p(ξ) - z|².
double curve_distance(const Poly& p, complex z);

SpectrumCurve trace_spectrum(const SpectralPencil& pencil, const ExceptionalSet& exc,
                             const std::vector<double>& xi_grid, std::optional<Window> window = std::nullopt,
                             const TraceOptions& opts = {});

struct CurveReport {
  std::size_t samples = 0;
  /// max |P(r,ξ)| / scale(P,r,ξ).
  double max_residual = 0.0;
  /// max over mirrored ξ pairs of |r(-ξ) - conj r(ξ)| / max(1,|r|),
  /// after pairing the two roots.
  double max_symmetry_defect = 0.0;
  /// Largest jump between consecutive samples on one branch.
  double max_branch_step = 0.0;
};

CurveReport curve_invariant_check(const SpectrumCurve& curve, const SpectralPencil& pencil);

}  // namespace essspec
