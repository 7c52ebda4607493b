#pragma once

// Coefficient expressions: a small complex-valued language over the spatial
// variable `x`, named parameters, `i`, `pi`, the operators + - * / ^ and a
// fixed set of elementary functions.

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "essspec/error.hpp"

namespace essspec {

using complex = std::complex<double>;

/// Syntax error in an expression; carries the byte offset into the source
/// and the set of tokens that would have been accepted there.
class ParseError : public Error {
public:
  ParseError(std::string message, std::size_t offset,
             std::vector<std::string> expected = {});

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Evaluation failure: unbound identifier, division by zero, 0 raised to a
/// non-positive power.
class EvalError : public Error {
public:
  using Error::Error;
};

using ParamMap = std::map<std::string, complex, std::less<>>;

enum class Func { Exp, Sin, Cos, Tan, Tanh, Sqrt, Abs };

/// Immutable expression tree. Copies share the underlying nodes.
class Expr {
public:
  enum class Kind { Number, Variable, ImagUnit, Pi, Param, Neg, Add, Sub, Mul, Div, Pow, Call };

  static Expr number(double value);
  static Expr variable();
  static Expr imag_unit();
  static Expr pi();
  static Expr param(std::string name);
  static Expr neg(Expr operand);
  static Expr binary(Kind op, Expr lhs, Expr rhs);
  static Expr call(Func f, Expr arg);

  Kind kind() const noexcept;

  /// Evaluates at `x` with identifiers resolved from `params`. `sqrt` of a
  /// negative real returns the principal complex root (sqrt(-4) = 2i).
  complex eval(double x, const ParamMap& params = {}) const;

  /// Minimal-parenthesis rendering; parse(to_string()) rebuilds the same tree.
  std::string to_string() const;

  bool depends_on_x() const;
  std::set<std::string> free_params() const;

  struct Node;

private:
  friend Expr parse_expr(std::string_view source);
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses `source`. `^` is right-associative and binds tighter than unary
/// minus (`-x^2` is -(x^2)); `*` and `/` bind tighter than `+` and `-`.
/// Unknown identifiers are accepted and resolved at evaluation time; unknown
/// function names are rejected.
Expr parse_expr(std::string_view source);

inline complex eval_expr(const Expr& e, double x, const ParamMap& params = {}) {
  return e.eval(x, params);
}

const char* func_name(Func f) noexcept;

}  // namespace essspec
