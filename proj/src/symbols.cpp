#include "essspec/symbols.hpp"

#include <algorithm>
#include <cmath>

namespace essspec {

namespace {

const ParamMap& empty_params() {
  static const ParamMap empty;
  return empty;
}

}  // namespace

CoeffFn::CoeffFn(complex limit, Expr perturbation, ParamMap params)
    : limit_(limit),
      perturbation_(std::move(perturbation)),
      params_(std::make_shared<const ParamMap>(std::move(params))) {}

const ParamMap& CoeffFn::params() const noexcept { return params_ ? *params_ : empty_params(); }

complex CoeffFn::value(double x) const {
  if (!perturbation_ || std::isinf(x)) return limit_;
  return limit_ + perturbation_->eval(x, params());
}

complex CoeffFn::perturbation_at(double x) const {
  if (!perturbation_ || std::isinf(x)) return {};
  return perturbation_->eval(x, params());
}

double CoeffFn::tail(double x_far) const {
  if (!perturbation_) return 0.0;
  return std::max(std::abs(perturbation_at(-x_far)), std::abs(perturbation_at(x_far)));
}

DiffSymbol::DiffSymbol(std::vector<CoeffFn> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back().is_identically_zero()) coeffs_.pop_back();
}

bool DiffSymbol::is_constant() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const CoeffFn& c) { return c.is_constant(); });
}

complex DiffSymbol::leading(double x) const {
  if (is_zero()) throw Error("no principal symbol: ZERO symbol");
  return coeffs_.back().value(x);
}

Poly DiffSymbol::limit_poly() const {
  std::vector<complex> v;
  v.reserve(coeffs_.size());
  for (const auto& c : coeffs_) v.push_back(c.limit());
  return Poly(std::move(v));
}

complex eval_symbol(const DiffSymbol& s, double x, double xi) {
  complex sum{};
  double xi_pow = 1.0;
  int j = 0;
  for (const auto& c : s.coeffs()) {
    sum += times_i_pow(c.value(x), j) * xi_pow;
    xi_pow *= xi;
    ++j;
  }
  return sum;
}

complex principal_symbol(const DiffSymbol& s, double x, double xi) {
  return s.leading(x) * i_xi_pow(xi, s.order());
}

complex eval_perturbation(const DiffSymbol& s, double x, double xi) {
  complex sum{};
  double xi_pow = 1.0;
  int j = 0;
  for (const auto& c : s.coeffs()) {
    if (!c.is_constant()) sum += times_i_pow(c.perturbation_at(x), j) * xi_pow;
    xi_pow *= xi;
    ++j;
  }
  return sum;
}

const char* entry_name(Entry e) noexcept {
  switch (e) {
    case Entry::A: return "a";
    case Entry::B: return "b";
    case Entry::C: return "c";
    case Entry::D: return "d";
  }
  return "?";
}

const char* case_name(OrderCase c) noexcept {
  switch (c) {
    case OrderCase::Diag: return "DIAG";
    case OrderCase::Balanced: return "BALANCED";
    case OrderCase::OffDiag: return "OFFDIAG";
  }
  return "?";
}

OperatorMatrix::OperatorMatrix(DiffSymbol a, DiffSymbol b, DiffSymbol c, DiffSymbol d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (a_.is_zero() || d_.is_zero())
    throw ValidationError("orders: diagonal entries Ta and Td must be non-zero");
  if (!(m() >= q() && q() > 0)) {
    throw ValidationError("orders: requires m≥q>0 (got m=" + std::to_string(m()) +
                          ", q=" + std::to_string(q()) + ")");
  }
}

const DiffSymbol& OperatorMatrix::entry(Entry e) const noexcept {
  switch (e) {
    case Entry::A: return a_;
    case Entry::B: return b_;
    case Entry::C: return c_;
    case Entry::D: break;
  }
  return d_;
}

int OperatorMatrix::offdiag_order() const noexcept {
  if (b_.is_zero() || c_.is_zero()) return kZeroOrder;
  return n() + p();
}

int OperatorMatrix::kappa() const noexcept { return std::max(diag_order(), offdiag_order()); }

OrderCase OperatorMatrix::order_case() const noexcept {
  if (diag_order() > offdiag_order()) return OrderCase::Diag;
  if (diag_order() == offdiag_order()) return OrderCase::Balanced;
  return OrderCase::OffDiag;
}

bool OperatorMatrix::is_constant() const noexcept {
  return a_.is_constant() && b_.is_constant() && c_.is_constant() && d_.is_constant();
}

const Poly& LimitingMatrix::entry(Entry e) const noexcept {
  switch (e) {
    case Entry::A: return a;
    case Entry::B: return b;
    case Entry::C: return c;
    case Entry::D: break;
  }
  return d;
}

std::array<complex, 4> LimitingMatrix::at_xi(double xi) const {
  return {a.at_xi(xi), b.at_xi(xi), c.at_xi(xi), d.at_xi(xi)};
}

LimitingMatrix limiting_matrix(const OperatorMatrix& T) {
  return {T.a().limit_poly(), T.b().limit_poly(), T.c().limit_poly(), T.d().limit_poly()};
}

complex det_M(const OperatorMatrix& T, double x, double xi) {
  const complex diag = principal_symbol(T.a(), x, xi) * principal_symbol(T.d(), x, xi);
  if (T.b().is_zero() || T.c().is_zero()) return diag;
  return diag - principal_symbol(T.b(), x, xi) * principal_symbol(T.c(), x, xi);
}

void check_decay(const OperatorMatrix& T, double x_far, double decay_tol) {
  for (Entry e : kEntries) {
    const auto coeffs = T.entry(e).coeffs();
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      const double tail = coeffs[j].tail(x_far);
      if (!(tail <= decay_tol)) {
        throw ValidationError(std::string("decay: perturbation of entry ") + entry_name(e) +
                              ", power " + std::to_string(j) + " has |value| " +
                              std::to_string(tail) + " at |x|=" + std::to_string(x_far) +
                              " (decay_tol " + std::to_string(decay_tol) +
                              "); coefficients must tend to a single limit as |x|→∞");
      }
    }
  }
}

}  // namespace essspec
