#include "essspec/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace essspec {

const char* scheme_name(Scheme s) noexcept { return s == Scheme::Fourier ? "FOURIER" : "FD"; }

std::vector<double> grid_frequencies(double L, int M) {
  std::vector<double> xi;
  xi.reserve(static_cast<std::size_t>(M));
  for (int k = -M / 2; k < M / 2; ++k) xi.push_back(std::numbers::pi * k / L);
  return xi;
}

namespace {

// First column of the circulant F⁻¹ diag(s_k) F: g[l] = (1/M) Σ_k s_k e^{2πikl/M}.
std::vector<complex> circulant_column(const std::vector<complex>& symbol, int M) {
  std::vector<complex> twiddle(static_cast<std::size_t>(M));
  for (int t = 0; t < M; ++t) twiddle[t] = std::polar(1.0, 2.0 * std::numbers::pi * t / M);
  std::vector<complex> g(static_cast<std::size_t>(M));
  for (int l = 0; l < M; ++l) {
    complex acc{};
    for (int idx = 0; idx < M; ++idx) {
      const int k = idx - M / 2;
      const int t = ((k * l) % M + M) % M;
      acc += symbol[idx] * twiddle[t];
    }
    g[l] = acc / double(M);
  }
  return g;
}

// Golden-section minimum over [lo, hi] of the distance from z to the nearer
// pencil root.
double refine_distance(const SpectralPencil& pencil, complex z, double lo, double hi) {
  auto f = [&](double xi) {
    const auto c = pencil.lambda_coeffs(xi);
    const auto r = quadratic_roots(c[0], c[1], c[2]);
    return std::min(std::abs(r[0] - z), std::abs(r[1] - z));
  };
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::min({fc, fd, f(lo), f(hi)});
}

}  // namespace

Discretization assemble(const OperatorMatrix& T, Scheme scheme, double L, int M) {
  if (M % 2 != 0 || M < 8 || M > 1024)
    throw Error("assemble: M must be even with 8 <= M <= 1024 (got " + std::to_string(M) + ")");
  if (!(L > 0.0) || !std::isfinite(L)) throw Error("assemble: L must be positive");

  const double h = 2.0 * L / M;
  const auto xi = grid_frequencies(L, M);
  int max_order = 0;
  for (Entry e : kEntries) max_order = std::max(max_order, T.entry(e).order());

  // D_j as circulant columns. The FD symbol of the composed difference is
  // (i·sin(ξh)/h)^j on the same modes.
  std::vector<std::vector<complex>> columns;
  for (int j = 0; j <= max_order; ++j) {
    std::vector<complex> symbol(static_cast<std::size_t>(M));
    for (int idx = 0; idx < M; ++idx) {
      if (scheme == Scheme::Fourier) {
        symbol[idx] = i_xi_pow(xi[idx], j);
      } else {
        symbol[idx] = i_xi_pow(std::sin(xi[idx] * h) / h, j);
      }
    }
    columns.push_back(circulant_column(symbol, M));
  }

  std::vector<double> x(static_cast<std::size_t>(M));
  for (int r = 0; r < M; ++r) x[r] = -L + 2.0 * L * r / M;

  Discretization out{scheme, L, M, ComplexMatrix(2 * static_cast<std::size_t>(M))};
  for (Entry e : kEntries) {
    const DiffSymbol& s = T.entry(e);
    const std::size_t row0 = (e == Entry::C || e == Entry::D) ? M : 0;
    const std::size_t col0 = (e == Entry::B || e == Entry::D) ? M : 0;
    for (int j = 0; j <= s.order(); ++j) {
      const CoeffFn& c = s.coeff(j);
      if (c.is_identically_zero()) continue;
      for (int r = 0; r < M; ++r) {
        complex cr;
        try {
          cr = c.value(x[r]);
        } catch (const std::exception& ex) {
          throw Error(std::string("assemble: coefficient ") + entry_name(e) + "_" + std::to_string(j) +
                      " failed at x=" + std::to_string(x[r]) + ": " + ex.what());
        }
        if (!std::isfinite(cr.real()) || !std::isfinite(cr.imag()))
          throw Error(std::string("assemble: coefficient ") + entry_name(e) + "_" + std::to_string(j) +
                      " is not finite at x=" + std::to_string(x[r]));
        for (int sidx = 0; sidx < M; ++sidx)
          out.matrix(row0 + r, col0 + sidx) += cr * columns[j][((r - sidx) % M + M) % M];
      }
    }
  }
  return out;
}

double grid_root_distance(const std::vector<complex>& eigs, const SpectralPencil& pencil, double L, int M) {
  std::vector<complex> roots;
  for (double xi : grid_frequencies(L, M)) {
    const auto c = pencil.lambda_coeffs(xi);
    const auto r = quadratic_roots(c[0], c[1], c[2]);
    roots.insert(roots.end(), r.begin(), r.end());
  }
  double worst = 0.0;
  for (const complex z : eigs) {
    double best = std::numeric_limits<double>::infinity();
    for (const complex r : roots) best = std::min(best, std::abs(z - r));
    worst = std::max(worst, best);
  }
  return worst;
}

ValidationReport validate_spectrum(const OperatorMatrix& T, const SpectralPencil& pencil, Scheme scheme,
                                   double L, int M, const Window& window, std::optional<double> dist_tol,
                                   const EigenOptions& eig) {
  const Discretization disc = assemble(T, scheme, L, M);
  const EigenResult er = eigenvalues(disc.matrix, eig);

  ValidationReport rep;
  rep.eigenvalues = er.eigenvalues;
  rep.converged = er.converged;

  const auto grid = tanh_grid(choose_xi_plot(pencil, window), 10 * 2000 + 1);
  TraceOptions topts;
  topts.compute_flags = false;
  const SpectrumCurve dense = trace_spectrum(pencil, ExceptionalSet{}, grid, std::nullopt, topts);
  const auto& s = dense.samples;

  auto speed = [&](std::size_t k, int b) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = std::min(k + 1, s.size() - 1);
    const double dxi = s[hi].xi - s[lo].xi;
    return dxi > 0.0 ? std::abs(s[hi].roots[b] - s[lo].roots[b]) / dxi : 0.0;
  };

  const double spacing = std::numbers::pi / L;
  for (const complex z : rep.eigenvalues) {
    if (!window.contains(z)) continue;
    ++rep.in_window;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    int best_b = 0;
    for (std::size_t k = 0; k < s.size(); ++k)
      for (int b = 0; b < 2; ++b) {
        const double d = std::abs(s[k].roots[b] - z);
        if (d < best) {
          best = d;
          best_k = k;
          best_b = b;
        }
      }
    best = std::min(best, refine_distance(pencil, z, s[best_k == 0 ? 0 : best_k - 1].xi,
                                          s[std::min(best_k + 1, s.size() - 1)].xi));
    const double tol = dist_tol ? *dist_tol : std::max(1e-2, 10.0 * spacing * speed(best_k, best_b));
    rep.max_dist_tol = std::max(rep.max_dist_tol, tol);
    if (best <= tol) {
      ++rep.matched;
      rep.max_matched_distance = std::max(rep.max_matched_distance, best);
    } else {
      rep.outliers.push_back(z);
    }
  }
  if (rep.in_window > 0) rep.matched_fraction = double(rep.matched) / double(rep.in_window);
  return rep;
}

}  // namespace essspec
