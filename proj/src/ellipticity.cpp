#include "essspec/ellipticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace essspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double japanese_bracket_pow(double xi, int k) { return std::pow(1.0 + xi * xi, 0.5 * k); }

std::vector<double> x_with_limit(const SampleGrid& grid) {
  std::vector<double> xs = grid.x;
  xs.push_back(kInf);
  return xs;
}

std::vector<Entry> decisive_entries(OrderCase c) {
  switch (c) {
    case OrderCase::Diag: return {Entry::A, Entry::D};
    case OrderCase::OffDiag: return {Entry::B, Entry::C};
    case OrderCase::Balanced: break;
  }
  return {};
}

// Coefficient of |ξ|^κ in |det M(x,ξ)| as |ξ| → ∞.
double det_tail(const OperatorMatrix& T, double x) {
  const complex diag = T.a().leading(x) * T.d().leading(x);
  switch (T.order_case()) {
    case OrderCase::Diag: return std::abs(diag);
    case OrderCase::OffDiag: return std::abs(T.b().leading(x) * T.c().leading(x));
    case OrderCase::Balanced: break;
  }
  // Both products carry i^κ.
  return std::abs(diag - T.b().leading(x) * T.c().leading(x));
}

double entry_margin(const DiffSymbol& s, const std::vector<double>& xs, const std::vector<double>& xis) {
  if (s.is_zero()) return 0.0;
  const int k = s.order();
  double margin = kInf;
  for (double x : xs) {
    const double lead = std::abs(s.leading(x));
    margin = std::min(margin, lead);  // |ξ| → ∞
    for (double xi : xis)
      margin = std::min(margin, std::abs(principal_symbol(s, x, xi)) / japanese_bracket_pow(xi, k));
  }
  return margin;
}

void fill_entry_margins(const OperatorMatrix& T, const SampleGrid& grid, EllipticityReport& r) {
  const auto xs = x_with_limit(grid);
  for (Entry e : decisive_entries(r.order_case))
    r.entry_margins[entry_name(e)] = entry_margin(T.entry(e), xs, grid.xi);
}

}  // namespace

void SampleGrid::validate() const {
  if (x.empty() || xi.empty()) throw Error("invalid grid: empty x or xi sample");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(x.begin(), x.end(), finite) || !std::all_of(xi.begin(), xi.end(), finite))
    throw Error("invalid grid: non-finite sample");
}

SampleGrid make_sample_grid(const GridOptions& o) {
  if (!(o.x_max > 0) || o.x_points < 1 || !(o.xi_min > 0) || !(o.xi_max >= o.xi_min) || o.xi_points < 1)
    throw Error("invalid grid options");
  SampleGrid g;
  for (int k = 0; k < o.x_points; ++k) {
    // Integer numerator keeps the grid exactly symmetric (x = 0 for odd counts).
    const double t = o.x_points == 1 ? 0.0 : double(2 * k - (o.x_points - 1)) / double(o.x_points - 1);
    g.x.push_back(o.x_max * t);
  }
  const double l0 = std::log10(o.xi_min);
  const double l1 = std::log10(o.xi_max);
  for (int k = 0; k < o.xi_points; ++k) {
    const double t = o.xi_points == 1 ? 0.0 : double(k) / double(o.xi_points - 1);
    const double mag = std::pow(10.0, l0 + (l1 - l0) * t);
    g.xi.push_back(-mag);
    g.xi.push_back(mag);
  }
  std::sort(g.xi.begin(), g.xi.end());
  return g;
}

SampleGrid merge(const SampleGrid& g, const SampleGrid& h) {
  SampleGrid r = g;
  r.x.insert(r.x.end(), h.x.begin(), h.x.end());
  r.xi.insert(r.xi.end(), h.xi.begin(), h.xi.end());
  std::sort(r.x.begin(), r.x.end());
  std::sort(r.xi.begin(), r.xi.end());
  r.x.erase(std::unique(r.x.begin(), r.x.end()), r.x.end());
  r.xi.erase(std::unique(r.xi.begin(), r.xi.end()), r.xi.end());
  return r;
}

EllipticityReport check_dn_ellipticity(const OperatorMatrix& T, const SampleGrid& grid, double margin_tol) {
  grid.validate();
  EllipticityReport r;
  r.kappa = T.kappa();
  r.order_case = T.order_case();
  r.assumption_b_ok = check_assumption_b(T);

  double margin = kInf;
  for (double x : x_with_limit(grid)) {
    margin = std::min(margin, det_tail(T, x));
    for (double xi : grid.xi)
      margin = std::min(margin, std::abs(det_M(T, x, xi)) / japanese_bracket_pow(xi, r.kappa));
  }
  r.dn_margin = margin;
  fill_entry_margins(T, grid, r);
  r.pass = r.dn_margin >= margin_tol && r.assumption_b_ok;
  return r;
}

EllipticityReport check_entrywise(const OperatorMatrix& T, const SampleGrid& grid, double margin_tol) {
  if (T.order_case() == OrderCase::Balanced)
    throw Error("entrywise criterion inapplicable in the balanced case m+q=n+p; use check_dn_ellipticity");
  grid.validate();
  EllipticityReport r;
  r.kappa = T.kappa();
  r.order_case = T.order_case();
  r.assumption_b_ok = check_assumption_b(T);
  fill_entry_margins(T, grid, r);

  r.dn_margin = kInf;
  for (double x : x_with_limit(grid)) {
    r.dn_margin = std::min(r.dn_margin, det_tail(T, x));
    for (double xi : grid.xi)
      r.dn_margin = std::min(r.dn_margin, std::abs(det_M(T, x, xi)) / japanese_bracket_pow(xi, r.kappa));
  }
  r.pass = r.assumption_b_ok;
  for (const auto& [name, m] : r.entry_margins) r.pass = r.pass && m >= margin_tol;
  return r;
}

bool check_assumption_b(const OperatorMatrix& T) {
  const int n = T.b().is_zero() ? kZeroOrder : T.n();
  const int p = T.c().is_zero() ? kZeroOrder : T.p();
  const int lo = std::min(n, p);
  const int hi = std::max(n, p);
  return lo >= 0 || hi <= 0 || T.diag_order() >= hi;
}

}  // namespace essspec
