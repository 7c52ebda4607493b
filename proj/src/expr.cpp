#include "essspec/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

namespace essspec {

ParseError::ParseError(std::string message, std::size_t offset, std::vector<std::string> expected)
    : Error(std::move(message)), offset_(offset), expected_(std::move(expected)) {}

struct Expr::Node {
  Kind kind;
  double value = 0.0;
  std::string name{};
  Func func = Func::Exp;
  std::shared_ptr<const Node> lhs{};
  std::shared_ptr<const Node> rhs{};
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

constexpr std::array<std::pair<std::string_view, Func>, 7> kFunctions{{
    {"exp", Func::Exp},
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"tan", Func::Tan},
    {"tanh", Func::Tanh},
    {"sqrt", Func::Sqrt},
    {"abs", Func::Abs},
}};

std::optional<Func> lookup_function(std::string_view name) {
  for (const auto& [n, f] : kFunctions)
    if (n == name) return f;
  return std::nullopt;
}

// Integer powers by repeated squaring keep i^2 == -1 and (-3)^2 == 9 exact.
complex int_pow(complex base, long n) {
  if (n < 0) {
    if (base == complex{}) throw EvalError("division by zero: 0 raised to a negative power");
    return complex{1.0} / int_pow(base, -n);
  }
  complex result{1.0};
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

complex power(complex base, complex exponent) {
  if (exponent.imag() == 0.0) {
    const double r = exponent.real();
    if (std::nearbyint(r) == r && std::abs(r) <= 1024.0) return int_pow(base, static_cast<long>(r));
  }
  if (base == complex{}) {
    if (exponent.real() > 0.0) return {};
    throw EvalError("0 raised to a non-positive power");
  }
  return std::pow(base, exponent);
}

complex apply(Func f, complex v) {
  switch (f) {
    case Func::Exp: return std::exp(v);
    case Func::Sin: return std::sin(v);
    case Func::Cos: return std::cos(v);
    case Func::Tan: return std::tan(v);
    case Func::Tanh: return std::tanh(v);
    case Func::Sqrt: return std::sqrt(v);
    case Func::Abs: return complex{std::abs(v)};
  }
  return {};
}

complex eval_node(const Expr::Node& n, double x, const ParamMap& params) {
  using K = Expr::Kind;
  switch (n.kind) {
    case K::Number: return complex{n.value};
    case K::Variable: return complex{x};
    case K::ImagUnit: return complex{0.0, 1.0};
    case K::Pi: return complex{std::numbers::pi};
    case K::Param: {
      auto it = params.find(n.name);
      if (it == params.end()) throw EvalError("unbound identifier '" + n.name + "'");
      return it->second;
    }
    case K::Neg: {
      // 0 - im keeps a zero imaginary part at +0 so branch cuts see -4, not -4 - 0i.
      const complex z = eval_node(*n.lhs, x, params);
      return {-z.real(), 0.0 - z.imag()};
    }
    case K::Add: return eval_node(*n.lhs, x, params) + eval_node(*n.rhs, x, params);
    case K::Sub: return eval_node(*n.lhs, x, params) - eval_node(*n.rhs, x, params);
    case K::Mul: return eval_node(*n.lhs, x, params) * eval_node(*n.rhs, x, params);
    case K::Div: {
      const complex num = eval_node(*n.lhs, x, params);
      const complex den = eval_node(*n.rhs, x, params);
      if (den == complex{}) throw EvalError("division by zero");
      return num / den;
    }
    case K::Pow: return power(eval_node(*n.lhs, x, params), eval_node(*n.rhs, x, params));
    case K::Call: return apply(n.func, eval_node(*n.lhs, x, params));
  }
  return {};
}

// Binding strength used by the printer: atoms > ^ > unary minus > * / > + -.
int precedence(Expr::Kind k) {
  using K = Expr::Kind;
  switch (k) {
    case K::Add:
    case K::Sub: return 1;
    case K::Mul:
    case K::Div: return 2;
    case K::Neg: return 3;
    case K::Pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

void print_node(const Expr::Node& n, std::string& out);

void print_child(const Expr::Node& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print_node(child, out);
  if (parens) out += ')';
}

void print_node(const Expr::Node& n, std::string& out) {
  using K = Expr::Kind;
  switch (n.kind) {
    case K::Number:
      if (std::signbit(n.value)) {
        out += '(' + format_number(n.value) + ')';
      } else {
        out += format_number(n.value);
      }
      return;
    case K::Variable: out += 'x'; return;
    case K::ImagUnit: out += 'i'; return;
    case K::Pi: out += "pi"; return;
    case K::Param: out += n.name; return;
    case K::Neg:
      if (n.lhs->kind == K::Number && !std::signbit(n.lhs->value)) {
        out += "(-" + format_number(n.lhs->value) + ')';
        return;
      }
      out += '-';
      print_child(*n.lhs, precedence(n.lhs->kind) < 3, out);
      return;
    case K::Call:
      out += func_name(n.func);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
    case K::Pow:
      // The base of ^ is a primary; the exponent is a unary expression.
      print_child(*n.lhs, precedence(n.lhs->kind) <= 4, out);
      out += '^';
      print_child(*n.rhs, precedence(n.rhs->kind) < 3, out);
      return;
    default: break;
  }
  const int p = precedence(n.kind);
  const char* op = n.kind == K::Add ? " + " : n.kind == K::Sub ? " - " : n.kind == K::Mul ? "*" : "/";
  print_child(*n.lhs, precedence(n.lhs->kind) < p, out);
  out += op;
  print_child(*n.rhs, precedence(n.rhs->kind) <= p, out);
}

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    NodePtr e = expression();
    skip_ws();
    if (pos_ != src_.size()) fail({"operator", "end of input"});
    return e;
  }

private:
  std::string_view src_;
  std::size_t pos_ = 0;

  static NodePtr make(Expr::Node n) { return std::make_shared<const Expr::Node>(std::move(n)); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string found = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'" : "end of input";
    std::string msg = "syntax error at offset " + std::to_string(pos_) + ": expected ";
    for (std::size_t k = 0; k < expected.size(); ++k) {
      if (k) msg += k + 1 == expected.size() ? " or " : ", ";
      msg += expected[k];
    }
    msg += ", found " + found;
    throw ParseError(msg, pos_, std::move(expected));
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (char c = peek(); c == '+' || c == '-'; c = peek()) {
      ++pos_;
      lhs = make({c == '+' ? Expr::Kind::Add : Expr::Kind::Sub, 0.0, {}, Func::Exp, lhs, term()});
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (char c = peek(); c == '*' || c == '/'; c = peek()) {
      ++pos_;
      lhs = make({c == '*' ? Expr::Kind::Mul : Expr::Kind::Div, 0.0, {}, Func::Exp, lhs, unary()});
    }
    return lhs;
  }

  NodePtr unary() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      NodePtr operand = unary();
      // A negated literal reads back as the literal it was printed from.
      if (operand->kind == Expr::Kind::Number && !std::signbit(operand->value))
        return make({Expr::Kind::Number, -operand->value, {}, Func::Exp, nullptr, nullptr});
      return make({Expr::Kind::Neg, 0.0, {}, Func::Exp, operand, nullptr});
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek() == '^') {
      ++pos_;
      return make({Expr::Kind::Pow, 0.0, {}, Func::Exp, base, unary()});
    }
    return base;
  }

  NodePtr primary() {
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == '(') {
      ++pos_;
      NodePtr inner = expression();
      if (peek() != ')') fail({"')'", "operator"});
      ++pos_;
      return inner;
    }
    fail({"number", "identifier", "'('", "'-'"});
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail({"digit"});
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail({"exponent digits"});
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc{} || ptr != src_.data() + pos_) {
      pos_ = start;
      fail({"number"});
    }
    return make({Expr::Kind::Number, v, {}, Func::Exp, nullptr, nullptr});
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    if (peek() == '(') {
      auto f = lookup_function(name);
      if (!f) {
        throw ParseError("unknown function '" + name + "' at offset " + std::to_string(start), start,
                         {"exp", "sin", "cos", "tan", "tanh", "sqrt", "abs"});
      }
      ++pos_;
      NodePtr arg = expression();
      if (peek() != ')') fail({"')'", "operator"});
      ++pos_;
      return make({Expr::Kind::Call, 0.0, {}, *f, arg, nullptr});
    }
    if (name == "x") return make({Expr::Kind::Variable});
    if (name == "i") return make({Expr::Kind::ImagUnit});
    if (name == "pi") return make({Expr::Kind::Pi});
    return make({Expr::Kind::Param, 0.0, name});
  }
};

bool node_depends_on_x(const Expr::Node& n) {
  if (n.kind == Expr::Kind::Variable) return true;
  return (n.lhs && node_depends_on_x(*n.lhs)) || (n.rhs && node_depends_on_x(*n.rhs));
}

void collect_params(const Expr::Node& n, std::set<std::string>& out) {
  if (n.kind == Expr::Kind::Param) out.insert(n.name);
  if (n.lhs) collect_params(*n.lhs, out);
  if (n.rhs) collect_params(*n.rhs, out);
}

}  // namespace

const char* func_name(Func f) noexcept {
  for (const auto& [n, g] : kFunctions)
    if (g == f) return n.data();
  return "?";
}

Expr Expr::number(double value) { return Expr(std::make_shared<const Node>(Node{Kind::Number, value})); }
Expr Expr::variable() { return Expr(std::make_shared<const Node>(Node{Kind::Variable})); }
Expr Expr::imag_unit() { return Expr(std::make_shared<const Node>(Node{Kind::ImagUnit})); }
Expr Expr::pi() { return Expr(std::make_shared<const Node>(Node{Kind::Pi})); }
Expr Expr::param(std::string name) {
  return Expr(std::make_shared<const Node>(Node{Kind::Param, 0.0, std::move(name)}));
}
Expr Expr::neg(Expr operand) {
  return Expr(std::make_shared<const Node>(Node{Kind::Neg, 0.0, {}, Func::Exp, operand.node_, nullptr}));
}
Expr Expr::binary(Kind op, Expr lhs, Expr rhs) {
  if (op != Kind::Add && op != Kind::Sub && op != Kind::Mul && op != Kind::Div && op != Kind::Pow)
    throw Error("Expr::binary: not a binary operator");
  return Expr(std::make_shared<const Node>(Node{op, 0.0, {}, Func::Exp, lhs.node_, rhs.node_}));
}
Expr Expr::call(Func f, Expr arg) {
  return Expr(std::make_shared<const Node>(Node{Kind::Call, 0.0, {}, f, arg.node_, nullptr}));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }

complex Expr::eval(double x, const ParamMap& params) const { return eval_node(*node_, x, params); }

std::string Expr::to_string() const {
  std::string out;
  print_node(*node_, out);
  return out;
}

bool Expr::depends_on_x() const { return node_depends_on_x(*node_); }

std::set<std::string> Expr::free_params() const {
  std::set<std::string> out;
  collect_params(*node_, out);
  return out;
}

Expr parse_expr(std::string_view source) {
  bool blank = true;
  for (char c : source) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) throw ParseError("empty expression", 0, {"number", "identifier", "'('", "'-'"});
  return Expr(Parser(source).parse());
}

}  // namespace essspec
