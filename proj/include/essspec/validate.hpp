#pragma once

// Periodic discretization of the operator matrix on [-L, L] and comparison
// of its eigenvalues with the analytic spectrum curve.

#include <optional>
#include <vector>

#include "essspec/numerics.hpp"
#include "essspec/spectrum.hpp"

namespace essspec {

enum class Scheme { Fourier, FD };
const char* scheme_name(Scheme s) noexcept;

struct Discretization {
  Scheme scheme = Scheme::Fourier;
  double L = 0.0;
  int M = 0;
  /// 2M × 2M, blocks [[A, B], [C, D]] on the grid x_r = -L + 2Lr/M.
  ComplexMatrix matrix;
};

/// Grid frequencies ξ_k = πk/L, k = -M/2 .. M/2-1.
std::vector<double> grid_frequencies(double L, int M);

/// Each block is Σ_j diag(c_j(x_r))·D_j. FOURIER: D_j = F⁻¹ diag((iξ_k)^j) F.
/// FD: D_j is the j-th power of the central first-difference circulant
/// (u_{r+1} - u_{r-1})/(2h), h = 2L/M. Throws Error on M odd, M outside
/// [8, 1024], L ≤ 0, or a coefficient that cannot be evaluated on the grid.
Discretization assemble(const OperatorMatrix& T, Scheme scheme, double L, int M);

struct ValidationReport {
  std::vector<complex> eigenvalues;
  bool converged = true;
  std::size_t in_window = 0;
  std::size_t matched = 0;
  /// matched / in_window; 1 when nothing falls inside the window.
  double matched_fraction = 1.0;
  double max_matched_distance = 0.0;
  /// Largest tolerance applied to an in-window eigenvalue.
  double max_dist_tol = 0.0;
  std::vector<complex> outliers;
};

/// Eigenvalues of the discretization, each in-window one compared with the
/// curve sampled on a tanh grid ten times denser than the plot grid, the
/// nearest sample refined by a golden-section search in ξ. The tolerance
/// is dist_tol when given; otherwise max(1e-2, 10·(π/L)·s) with s the local
/// |dλ/dξ| of the nearest curve sample.
ValidationReport validate_spectrum(const OperatorMatrix& T, const SpectralPencil& pencil, Scheme scheme,
                                   double L, int M, const Window& window,
                                   std::optional<double> dist_tol = std::nullopt,
                                   const EigenOptions& eig = {});

/// max over eigs of the distance to the nearest pencil root at a grid
/// frequency of (L, M).
double grid_root_distance(const std::vector<complex>& eigs, const SpectralPencil& pencil, double L, int M);

}  // namespace essspec
