#include "essspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "essspec/numerics.hpp"

namespace essspec {

std::vector<double> tanh_grid(double xi_plot, int points) {
  if (points < 1) throw Error("tanh_grid: need at least one point");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double u = points == 1 ? 0.0 : 3.0 * double(2 * k - (points - 1)) / double(points - 1);
    g[k] = xi_plot * std::tanh(u);
  }
  return g;
}

double choose_xi_plot(const SpectralPencil& pencil, const Window& window) {
  double xi_plot = 1.0;
  for (; xi_plot < 65536.0; xi_plot *= 2.0) {
    const double end = xi_plot * std::tanh(3.0);
    bool all_out = true;
    for (double xi : {-end, end}) {
      const auto c = pencil.lambda_coeffs(xi);
      const auto r = quadratic_roots(c[0], c[1], c[2]);
      all_out = all_out && !window.contains(r[0]) && !window.contains(r[1]);
    }
    if (all_out) break;
  }
  return xi_plot;
}

double curve_distance(const Poly& p, complex z) {
  const int k = p.degree();
  if (k <= 0) return std::abs(p.coeff(0) - z);

  // q(t) = p(t) - z with coefficients in powers of real t.
  std::vector<complex> q(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) q[j] = times_i_pow(p.coeff(j), j);
  q[0] -= z;
  auto q_at = [&](double t) {
    complex acc{};
    for (int j = k; j >= 0; --j) acc = acc * t + q[j];
    return acc;
  };

  if (k == 1) {
    const double t = -(std::conj(q[1]) * q[0]).real() / std::norm(q[1]);
    return std::abs(q_at(t));
  }

  // g(t) = |q(t)|² = Σ G_n t^n; minimisers are real roots of g'.
  std::vector<double> G(2 * static_cast<std::size_t>(k) + 1, 0.0);
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b) G[a + b] += (q[a] * std::conj(q[b])).real();
  std::vector<complex> dg;  // high-to-low
  for (int n = 2 * k; n >= 1; --n) dg.push_back(complex{n * G[n]});

  double best = std::abs(q[0]);
  for (const complex r : poly_roots(dg)) {
    double t = r.real();
    // A few real Newton steps on g'.
    for (int it = 0; it < 3; ++it) {
      double d1 = 0.0, d2 = 0.0;
      for (int n = 2 * k; n >= 1; --n) {
        d2 = d2 * t + d1;
        d1 = d1 * t + n * G[n];
      }
      if (d2 == 0.0) break;
      t -= d1 / d2;
    }
    best = std::min({best, std::abs(q_at(t)), std::abs(q_at(r.real()))});
  }
  return best;
}

namespace {

RootFlags flag_root(complex r, const ExceptionalSet& exc, const std::optional<Window>& window,
                    const TraceOptions& opts) {
  RootFlags f;
  if (opts.compute_flags) {
    f.near_sigma_d = curve_distance(exc.poly_d, r) <= opts.excl_tol;
    f.near_sigma_a = curve_distance(exc.poly_a, r) <= opts.excl_tol;
    f.in_lambda_set = std::any_of(exc.lambda_set.begin(), exc.lambda_set.end(),
                                  [&](const LambdaPoint& p) { return std::abs(p.lambda - r) <= opts.excl_tol; });
  }
  f.ok = !f.in_lambda_set && !(f.near_sigma_d && f.near_sigma_a);
  f.clipped = window && !window->contains(r);
  return f;
}

bool lex_less(complex a, complex b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

}  // namespace

SpectrumCurve trace_spectrum(const SpectralPencil& pencil, const ExceptionalSet& exc,
                             const std::vector<double>& xi_grid, std::optional<Window> window,
                             const TraceOptions& opts) {
  SpectrumCurve curve;
  curve.xi_grid = xi_grid;
  curve.window = window;
  curve.samples.reserve(xi_grid.size());

  std::vector<std::size_t> order(xi_grid.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return xi_grid[i] < xi_grid[j]; });

  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    const double xi = xi_grid[order[idx]];
    const auto c = pencil.lambda_coeffs(xi);
    auto r = quadratic_roots(c[0], c[1], c[2]);
    if (idx == 0) {
      if (lex_less(r[1], r[0])) std::swap(r[0], r[1]);
    } else {
      // Two roots: the cheaper of the two pairings is the optimal matching.
      const auto& prev = curve.samples.back().roots;
      const double keep = std::abs(r[0] - prev[0]) + std::abs(r[1] - prev[1]);
      const double swap = std::abs(r[1] - prev[0]) + std::abs(r[0] - prev[1]);
      if (swap < keep) std::swap(r[0], r[1]);
    }
    SpectrumSample s;
    s.xi = xi;
    s.roots = r;
    for (int b = 0; b < 2; ++b) s.flags[b] = flag_root(r[b], exc, window, opts);
    curve.samples.push_back(s);
  }
  return curve;
}

CurveReport curve_invariant_check(const SpectrumCurve& curve, const SpectralPencil& pencil) {
  CurveReport rep;
  const auto& s = curve.samples;
  rep.samples = s.size();
  for (std::size_t k = 0; k < s.size(); ++k) {
    for (const complex r : s[k].roots) {
      const double scale = pencil.scale(r, s[k].xi);
      const double res = std::abs(pencil.at(r, s[k].xi));
      rep.max_residual = std::max(rep.max_residual, scale == 0.0 ? res : res / scale);
    }
    if (k + 1 < s.size())
      for (int b = 0; b < 2; ++b)
        rep.max_branch_step = std::max(rep.max_branch_step, std::abs(s[k + 1].roots[b] - s[k].roots[b]));
  }
  // Samples are sorted by ξ, so mirrored ξ sit at mirrored indices.
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& lo = s[k];
    const auto& hi = s[s.size() - 1 - k];
    if (lo.xi != -hi.xi) continue;
    auto gap = [](complex a, complex b) { return std::abs(a - std::conj(b)) / std::max(1.0, std::abs(b)); };
    const double straight = std::max(gap(lo.roots[0], hi.roots[0]), gap(lo.roots[1], hi.roots[1]));
    const double crossed = std::max(gap(lo.roots[0], hi.roots[1]), gap(lo.roots[1], hi.roots[0]));
    rep.max_symmetry_defect = std::max(rep.max_symmetry_defect, std::min(straight, crossed));
  }
  return rep;
}

}  // namespace essspec
