#pragma once

// Scalar expressions over variables x1..xn: parsing, evaluation, and exact
// first derivatives by forward-mode automatic differentiation.
//
// Grammar (^ binds tightest and is right-associative, then unary minus,
// then * /, then + -):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' factor)?
//   base   := number | variable | function '(' expr ')' | '(' expr ')'
// Functions: sin cos exp log sqrt. Nonsmooth primitives (abs, max, ...) are
// deliberately rejected so every accepted expression is differentiable on
// its domain. Domain violations (log of a nonpositive value, sqrt of a
// negative, division by zero, non-integer power of a negative base) raise
// EvalError rather than propagating NaN.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "conekit/linalg.hpp"

namespace conekit {

// Value + one derivative channel. A gradient in n variables costs n forward
// passes, which is the right trade at desk scale.
struct Dual {
  double val = 0.0;
  double der = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v, double d = 0.0) : val(v), der(d) {}
};

constexpr Dual operator+(Dual a, Dual b) { return {a.val + b.val, a.der + b.der}; }
constexpr Dual operator-(Dual a, Dual b) { return {a.val - b.val, a.der - b.der}; }
constexpr Dual operator-(Dual a) { return {-a.val, -a.der}; }
// Product rule, kept in this exact operand order so tests can assert it bitwise.
constexpr Dual operator*(Dual a, Dual b) {
  return {a.val * b.val, a.der * b.val + a.val * b.der};
}
constexpr Dual operator/(Dual a, Dual b) {
  return {a.val / b.val, (a.der * b.val - a.val * b.der) / (b.val * b.val)};
}

// Syntax or semantic error found while parsing; offset is a byte position
// into the source text (text.size() means "at end of input").
struct ParseError : std::runtime_error {
  size_t offset;
  ParseError(size_t off, const std::string& msg)
      : std::runtime_error(msg + " (at offset " + std::to_string(off) + ")"), offset(off) {}
};

// Domain error raised during evaluation (log(<=0), sqrt(<0), x/0, ...).
struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class NodeKind { Constant, Variable, Neg, Binary, Call };
enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class Func { Sin, Cos, Exp, Log, Sqrt };

struct Node {
  NodeKind kind;
  double value = 0.0;  // Constant
  int index = 0;       // Variable, 0-based
  BinOp op = BinOp::Add;
  Func fn = Func::Sin;
  std::unique_ptr<Node> lhs, rhs;  // Neg/Call use lhs only
};

// A parsed expression over a declared number of variables.
class Expr {
 public:
  Expr() = default;
  Expr(std::unique_ptr<Node> root, int dim) : root_(std::move(root)), dim_(dim) {}
  Expr(const Expr& other);
  Expr& operator=(const Expr& other);
  Expr(Expr&&) = default;
  Expr& operator=(Expr&&) = default;

  const Node* root() const { return root_.get(); }
  int dim() const { return dim_; }
  bool empty() const { return root_ == nullptr; }

 private:
  std::unique_ptr<Node> root_;
  int dim_ = 0;
};

// Parse text over variables x1..xn. Throws ParseError with a byte offset on
// syntax errors, unknown identifiers, and variable indices outside 1..n.
Expr parse(const std::string& text, int n);

double eval(const Expr& e, const Vec& x);

// d e / d x_i for all i, by n forward-mode passes.
Vec grad(const Expr& e, const Vec& x);

// Stacked gradients of several expressions (rows = expressions).
Mat jacobian(const std::vector<Expr>& es, const Vec& x);

// Fully parenthesized round-trippable rendering: parse(print(e)) is
// structurally identical to e.
std::string print(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace conekit
