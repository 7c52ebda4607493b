#include "essspec/schur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "essspec/numerics.hpp"

namespace essspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool offdiag_vanishes(const OperatorMatrix& T) { return T.b().is_zero() || T.c().is_zero(); }

}  // namespace

complex SpectralPencil::at(complex lam, double xi) const {
  return (lam + A.at_xi(xi)) * lam + B.at_xi(xi);
}

std::array<complex, 3> SpectralPencil::lambda_coeffs(double xi) const {
  return {complex{1.0}, A.at_xi(xi), B.at_xi(xi)};
}

double SpectralPencil::scale(complex lam, double xi) const {
  const double r = std::abs(lam);
  return r * r + std::abs(A.at_xi(xi)) * r + std::abs(B.at_xi(xi));
}

complex schur_symbol(const OperatorMatrix& T, SchurKind which, complex lam, double x, double xi,
                     double pole_tol) {
  const bool first = which == SchurKind::First;
  const DiffSymbol& main = first ? T.a() : T.d();
  const DiffSymbol& other = first ? T.d() : T.a();
  const complex diag = eval_symbol(main, x, xi) - lam;
  if (offdiag_vanishes(T)) return diag;

  const complex den = eval_symbol(other, x, xi) - lam;
  if (std::abs(den) <= pole_tol) {
    throw PoleError(std::string("schur_symbol: resolvent pole, |") + (first ? "d" : "a") +
                    "(x,xi) - lambda| <= pole_tol at xi=" + std::to_string(xi));
  }
  const complex bc = eval_symbol(T.b(), x, xi) * eval_symbol(T.c(), x, xi);
  return diag - bc / den;
}

complex principal_schur_symbol(const OperatorMatrix& T, double x, double xi, double pole_tol) {
  const complex am = principal_symbol(T.a(), x, xi);
  const OrderCase oc = T.order_case();
  if (oc == OrderCase::Diag) return am;

  const complex dq = principal_symbol(T.d(), x, xi);
  if (std::abs(dq) <= pole_tol)
    throw PoleError("principal_schur_symbol: d_q vanishes at xi=" + std::to_string(xi));
  const complex ratio = principal_symbol(T.b(), x, xi) * principal_symbol(T.c(), x, xi) / dq;
  return oc == OrderCase::Balanced ? am - ratio : -ratio;
}

SpectralPencil build_pencil(const LimitingMatrix& L) {
  return {-(L.a + L.d), L.a * L.d - L.b * L.c};
}

SpectralPencil pencil_from_schur(const OperatorMatrix& T, SchurKind which) {
  const LimitingMatrix L = limiting_matrix(T);
  const Poly& den_poly = which == SchurKind::First ? L.d : L.a;
  const int degree = std::max({L.a.degree() + L.d.degree(), L.b.degree() + L.c.degree(), L.a.degree(),
                               L.d.degree(), 0});
  const int nodes = degree + 1;

  std::vector<double> xis(nodes);
  double den_max = 0.0;
  for (int k = 0; k < nodes; ++k) {
    xis[k] = std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * nodes));
    den_max = std::max(den_max, std::abs(den_poly.at_xi(xis[k])));
  }
  // λ on a circle well outside the sampled denominator values.
  const double radius = 2.0 + 2.0 * den_max;
  std::array<complex, 3> omega;
  for (int j = 0; j < 3; ++j) omega[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / 3.0);

  std::vector<complex> a_vals(nodes), b_vals(nodes);
  for (int k = 0; k < nodes; ++k) {
    const double xi = xis[k];
    std::array<complex, 3> f;
    for (int j = 0; j < 3; ++j) {
      const complex lam = radius * omega[j];
      f[j] = (den_poly.at_xi(xi) - lam) * schur_symbol(T, which, lam, kInf, xi);
    }
    // f_j = ρ²ω^2j + Aρω^j + B, recovered by the 3-point DFT.
    complex s0{}, s1{};
    for (int j = 0; j < 3; ++j) {
      s0 += f[j];
      s1 += f[j] * std::conj(omega[j]);
    }
    b_vals[k] = s0 / 3.0;
    a_vals[k] = s1 / (3.0 * radius);
  }

  // Interpolate values in ξ, then rotate ξ^j coefficients to (iξ)^j.
  auto interpolate = [&](const std::vector<complex>& vals) {
    using lc = std::complex<long double>;
    std::vector<std::vector<lc>> v(nodes, std::vector<lc>(nodes + 1));
    for (int r = 0; r < nodes; ++r) {
      long double p = 1.0L;
      for (int c = 0; c < nodes; ++c) {
        v[r][c] = p;
        p *= static_cast<long double>(xis[r]);
      }
      v[r][nodes] = lc(vals[r].real(), vals[r].imag());
    }
    for (int c = 0; c < nodes; ++c) {
      int piv = c;
      for (int r = c + 1; r < nodes; ++r)
        if (std::abs(v[r][c]) > std::abs(v[piv][c])) piv = r;
      std::swap(v[c], v[piv]);
      for (int r = c + 1; r < nodes; ++r) {
        const lc l = v[r][c] / v[c][c];
        for (int k = c; k <= nodes; ++k) v[r][k] -= l * v[c][k];
      }
    }
    std::vector<complex> coeffs(nodes);
    for (int r = nodes - 1; r >= 0; --r) {
      lc s = v[r][nodes];
      for (int k = r + 1; k < nodes; ++k) s -= v[r][k] * lc(coeffs[k].real(), coeffs[k].imag());
      s /= v[r][r];
      coeffs[r] = complex(static_cast<double>(s.real()), static_cast<double>(s.imag()));
    }
    for (int j = 0; j < nodes; ++j) coeffs[j] = times_i_pow(coeffs[j], -j);
    return Poly(std::move(coeffs));
  };
  return {interpolate(a_vals), interpolate(b_vals)};
}

std::vector<double> default_stabilization_grid(int points_per_side) {
  std::vector<double> g{0.0};
  for (int k = 0; k < points_per_side; ++k) {
    const double t = points_per_side == 1 ? 0.0 : double(k) / double(points_per_side - 1);
    const double mag = std::pow(10.0, -3.0 + 6.0 * t);
    g.push_back(mag);
    g.push_back(-mag);
  }
  std::sort(g.begin(), g.end());
  return g;
}

complex default_probe(const OperatorMatrix& T, const std::vector<double>& xi_grid) {
  const Poly d_inf = T.d().limit_poly();
  double max_re = 0.0;
  for (double xi : xi_grid) max_re = std::max(max_re, d_inf.at_xi(xi).real());
  double unit_ball = 0.0;
  for (int k = -100; k <= 100; ++k) unit_ball = std::max(unit_ball, std::abs(d_inf.at_xi(k / 100.0)));
  return complex{max_re + 1.0 + std::max(1.0, 2.0 * unit_ball)};
}

double stabilization_metric(const OperatorMatrix& T, complex lam, double x,
                            const std::vector<double>& xi_grid, double pole_guard) {
  const int weight_exp = T.q() - T.kappa();
  const bool coupled = !offdiag_vanishes(T);
  const LimitingMatrix L = limiting_matrix(T);
  double sup = 0.0;
  for (double xi : xi_grid) {
    const complex d_inf = L.d.at_xi(xi) - lam;
    const complex d_x = eval_symbol(T.d(), x, xi) - lam;
    if (std::abs(d_inf) < pole_guard || std::abs(d_x) < pole_guard) {
      throw PoleError("stabilization_metric: probe lambda within pole_guard of the curve of Td at xi=" +
                      std::to_string(xi));
    }
    complex diff = eval_perturbation(T.a(), x, xi);
    if (coupled) {
      const complex b_inf = L.b.at_xi(xi);
      const complex c_inf = L.c.at_xi(xi);
      const complex db = eval_perturbation(T.b(), x, xi);
      const complex dc = eval_perturbation(T.c(), x, xi);
      const complex dd = eval_perturbation(T.d(), x, xi);
      // bc/(d-λ) - b∞c∞/(d∞-λ) over a common denominator.
      const complex num = (db * (c_inf + dc) + b_inf * dc) * d_inf - b_inf * c_inf * dd;
      diff -= num / (d_x * d_inf);
    }
    const double w = std::pow(1.0 + xi * xi, 0.5 * weight_exp);
    sup = std::max(sup, w * std::abs(diff));
  }
  return sup;
}

namespace {

struct Refined {
  double t1, t2;
  double residual;
  bool tangential;
};

// Minimises |F| along one coordinate by golden-section search on [t-h, t+h].
template <class Fn>
double golden_min(Fn&& f, double t, double h) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = t - h, hi = t + h;
  double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
  double f1 = f(m1), f2 = f(m2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - g * (hi - lo);
      f1 = f(m1);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + g * (hi - lo);
      f2 = f(m2);
    }
  }
  const double best = 0.5 * (lo + hi);
  return f(best) < f(t) ? best : t;
}

bool near_singular(complex u, complex w) {
  const double nu = std::abs(u), nw = std::abs(w);
  if (nu == 0.0 || nw == 0.0) return true;
  const double sin_angle = std::abs(u.real() * w.imag() - w.real() * u.imag()) / (nu * nw);
  return sin_angle <= 1e-3 || std::min(nu, nw) <= 1e-3 * std::max(nu, nw);
}

// Damped Newton on F(t1,t2) = a(t1) - d(t2) as two real equations; a
// singular Jacobian or a failed line search falls back to coordinate-wise
// bracketed minimisation.
Refined refine_intersection(const Poly& a, const Poly& d, double t1, double t2, double h, double tol) {
  auto F = [&](double s1, double s2) { return a.at_xi(s1) - d.at_xi(s2); };
  complex f = F(t1, t2);
  for (int it = 0; it < 100 && std::abs(f) > tol; ++it) {
    const complex u = a.derivative_at_xi(t1);
    const complex w = -d.derivative_at_xi(t2);
    const double det = u.real() * w.imag() - w.real() * u.imag();
    bool stepped = false;
    const double nu = std::abs(u), nw = std::abs(w);
    if (nu > 0.0 && nw > 0.0 && std::abs(det) > 1e-14 * nu * nw) {
      const double d1 = -(w.imag() * f.real() - w.real() * f.imag()) / det;
      const double d2 = -(-u.imag() * f.real() + u.real() * f.imag()) / det;
      for (double damp = 1.0; damp > 1e-6; damp *= 0.5) {
        const complex trial = F(t1 + damp * d1, t2 + damp * d2);
        if (std::abs(trial) < std::abs(f)) {
          t1 += damp * d1;
          t2 += damp * d2;
          f = trial;
          stepped = true;
          break;
        }
      }
    }
    if (!stepped) {
      const double prev = std::abs(f);
      t1 = golden_min([&](double s) { return std::abs(F(s, t2)); }, t1, h);
      t2 = golden_min([&](double s) { return std::abs(F(t1, s)); }, t2, h);
      f = F(t1, t2);
      h *= 0.5;
      if (!(std::abs(f) < prev) && h < 1e-300) break;
    }
  }
  return {t1, t2, std::abs(f), near_singular(a.derivative_at_xi(t1), d.derivative_at_xi(t2))};
}

double orient(complex p, complex q, complex r) {
  const complex u = q - p, v = r - p;
  return u.real() * v.imag() - u.imag() * v.real();
}

// Parameter s ∈ (0,1) along p0→p1 where it properly crosses q0→q1.
bool proper_crossing(complex p0, complex p1, complex q0, complex q1, double& s, double& t) {
  const double o1 = orient(p0, p1, q0), o2 = orient(p0, p1, q1);
  const double o3 = orient(q0, q1, p0), o4 = orient(q0, q1, p1);
  if (!((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0))) return false;
  if (!((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return false;
  s = o3 / (o3 - o4);
  t = o1 / (o1 - o2);
  return true;
}

}  // namespace

ExceptionalSet exceptional_sets(const LimitingMatrix& L, const std::vector<double>& xi_grid,
                                const ExceptionalOptions& opts) {
  ExceptionalSet out;
  out.poly_a = L.a;
  out.poly_d = L.d;
  const std::size_t n = xi_grid.size();
  out.curve_a.reserve(n);
  out.curve_d.reserve(n);
  for (double xi : xi_grid) {
    out.curve_a.push_back(L.a.at_xi(xi));
    out.curve_d.push_back(L.d.at_xi(xi));
  }
  if (!opts.search) return out;

  struct Candidate {
    double t1, t2, h;
  };
  std::vector<Candidate> cands;
  auto spacing = [&](std::size_t k) {
    double h = 0.0;
    if (k + 1 < n) h = std::max(h, std::abs(xi_grid[k + 1] - xi_grid[k]));
    if (k > 0) h = std::max(h, std::abs(xi_grid[k] - xi_grid[k - 1]));
    return h > 0.0 ? h : 1.0;
  };

  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    double best_dist = kInf;
    for (std::size_t j = 0; j < n; ++j) {
      const double dist = std::abs(out.curve_a[i] - out.curve_d[j]);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best_dist <= opts.coarse_tol) cands.push_back({xi_grid[i], xi_grid[best], spacing(i)});
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const complex p0 = out.curve_a[i], p1 = out.curve_a[i + 1];
    const double pxl = std::min(p0.real(), p1.real()), pxh = std::max(p0.real(), p1.real());
    const double pyl = std::min(p0.imag(), p1.imag()), pyh = std::max(p0.imag(), p1.imag());
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const complex q0 = out.curve_d[j], q1 = out.curve_d[j + 1];
      if (std::max(q0.real(), q1.real()) < pxl || std::min(q0.real(), q1.real()) > pxh) continue;
      if (std::max(q0.imag(), q1.imag()) < pyl || std::min(q0.imag(), q1.imag()) > pyh) continue;
      double s = 0.0, t = 0.0;
      if (!proper_crossing(p0, p1, q0, q1, s, t)) continue;
      cands.push_back({xi_grid[i] + s * (xi_grid[i + 1] - xi_grid[i]),
                       xi_grid[j] + t * (xi_grid[j + 1] - xi_grid[j]), spacing(i)});
    }
  }

  std::vector<LambdaPoint> found;
  for (const auto& c : cands) {
    const Refined r = refine_intersection(L.a, L.d, c.t1, c.t2, c.h, opts.refine_tol);
    if (!(r.residual <= opts.refine_tol)) continue;
    found.push_back({L.a.at_xi(r.t1), r.t1, r.t2, r.residual, r.tangential});
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const LambdaPoint& p, const LambdaPoint& q) { return p.residual < q.residual; });
  const double merge = 10.0 * opts.refine_tol;
  for (const auto& p : found) {
    const bool dup = std::any_of(out.lambda_set.begin(), out.lambda_set.end(), [&](const LambdaPoint& q) {
      return std::abs(p.lambda - q.lambda) < merge;
    });
    if (!dup) out.lambda_set.push_back(p);
  }
  return out;
}

OmegaReport omega_condition(const OperatorMatrix& T, const std::vector<double>& x_grid) {
  const DiffSymbol& a = T.a();
  const char* prefix = "omega-condition requires film-template operator: ";
  if (a.order() != 2) throw Error(std::string(prefix) + "Ta must have order 2");
  const CoeffFn& lead = a.coeff(2);
  if (!lead.is_constant() || lead.limit().imag() != 0.0 || !(lead.limit().real() > 0.0))
    throw Error(std::string(prefix) + "leading coefficient of Ta must be a positive real constant");
  const double kappa2 = lead.limit().real();

  std::vector<double> xs = x_grid;
  xs.push_back(kInf);
  double sup_phi0 = -kInf;
  double sup_phi1 = 0.0;
  for (double x : xs) {
    const complex phi0 = a.coeff(0).value(x);
    if (std::abs(phi0.imag()) > 1e-12 * std::max(1.0, std::abs(phi0.real())))
      throw Error(std::string(prefix) + "phi0 must be real-valued");
    sup_phi0 = std::max(sup_phi0, phi0.real());
    sup_phi1 = std::max(sup_phi1, std::abs(a.coeff(1).value(x)));
  }
  OmegaReport r;
  r.omega1 = -sup_phi0;
  r.omega2 = sup_phi1;
  r.bound = std::sqrt(std::max(0.0, 2.0 * kappa2 * r.omega1));
  r.holds = r.omega1 > 0.0 && r.omega2 < r.bound;
  return r;
}

}  // namespace essspec
