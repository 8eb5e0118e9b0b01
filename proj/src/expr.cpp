#include "conekit/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace conekit {

namespace {

std::unique_ptr<Node> clone(const Node* n) {
  if (!n) return nullptr;
  auto c = std::make_unique<Node>();
  c->kind = n->kind;
  c->value = n->value;
  c->index = n->index;
  c->op = n->op;
  c->fn = n->fn;
  c->lhs = clone(n->lhs.get());
  c->rhs = clone(n->rhs.get());
  return c;
}

// ---------------------------------------------------------------- tokenizer

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  size_t offset;
  double number = 0.0;
  std::string text;

  Token(Tok k, size_t off) : kind(k), offset(off) {}
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      // number: digits [. digits] [eE [+-] digits]
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      Token t{Tok::Number, start};
      t.number = std::strtod(s.substr(start, i - start).c_str(), nullptr);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
      std::string letters = s.substr(start, i - start);
      std::string digits;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
      Token t{Tok::Ident, start};
      t.text = letters + digits;
      out.push_back(std::move(t));
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default:
        throw ParseError(start, std::string("unexpected character '") + c + "'");
    }
    out.push_back(Token{k, start});
    ++i;
  }
  out.push_back(Token{Tok::End, s.size()});
  return out;
}

// ------------------------------------------------------------------- parser

class Parser {
 public:
  Parser(std::vector<Token> toks, int n) : toks_(std::move(toks)), n_(n) {}

  std::unique_ptr<Node> run() {
    auto e = expr();
    if (peek().kind != Tok::End) throw ParseError(peek().offset, "unexpected trailing input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }
  bool match(Tok k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::unique_ptr<Node> expr() {
    auto lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      BinOp op = advance().kind == Tok::Plus ? BinOp::Add : BinOp::Sub;
      auto rhs = term();
      lhs = make_binary(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  std::unique_ptr<Node> term() {
    auto lhs = factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      BinOp op = advance().kind == Tok::Star ? BinOp::Mul : BinOp::Div;
      auto rhs = factor();
      lhs = make_binary(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  // '-' at factor level keeps ^ tighter than unary minus: -x1^2 = -(x1^2).
  std::unique_ptr<Node> factor() {
    if (match(Tok::Minus)) {
      auto n = std::make_unique<Node>();
      n->kind = NodeKind::Neg;
      n->lhs = factor();
      return n;
    }
    auto b = base();
    if (match(Tok::Caret)) {
      auto e = factor();  // right-associative
      return make_binary(BinOp::Pow, std::move(b), std::move(e));
    }
    return b;
  }

  std::unique_ptr<Node> base() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        advance();
        auto n = std::make_unique<Node>();
        n->kind = NodeKind::Constant;
        n->value = t.number;
        return n;
      }
      case Tok::Ident:
        advance();
        return ident(t);
      case Tok::LParen: {
        advance();
        auto e = expr();
        if (!match(Tok::RParen)) throw ParseError(peek().offset, "expected ')'");
        return e;
      }
      default:
        throw ParseError(t.offset, "expected a number, variable, function, or '('");
    }
  }

  std::unique_ptr<Node> ident(const Token& t) {
    const std::string& name = t.text;
    // Variable: 'x' followed by its 1-based index.
    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      long idx = std::strtol(name.c_str() + 1, nullptr, 10);
      if (idx < 1) throw ParseError(t.offset, "variable index must be >= 1: " + name);
      if (idx > n_)
        throw ParseError(t.offset, "variable " + name + " exceeds declared dimension " +
                                       std::to_string(n_));
      auto n = std::make_unique<Node>();
      n->kind = NodeKind::Variable;
      n->index = static_cast<int>(idx - 1);
      return n;
    }
    Func fn;
    if (name == "sin") fn = Func::Sin;
    else if (name == "cos") fn = Func::Cos;
    else if (name == "exp") fn = Func::Exp;
    else if (name == "log") fn = Func::Log;
    else if (name == "sqrt") fn = Func::Sqrt;
    else throw ParseError(t.offset, "unknown identifier: " + name);
    if (!match(Tok::LParen))
      throw ParseError(peek().offset, "expected '(' after function " + name);
    auto arg = expr();
    if (!match(Tok::RParen)) throw ParseError(peek().offset, "expected ')'");
    auto n = std::make_unique<Node>();
    n->kind = NodeKind::Call;
    n->fn = fn;
    n->lhs = std::move(arg);
    return n;
  }

  static std::unique_ptr<Node> make_binary(BinOp op, std::unique_ptr<Node> l,
                                           std::unique_ptr<Node> r) {
    auto n = std::make_unique<Node>();
    n->kind = NodeKind::Binary;
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  int n_;
};

// --------------------------------------------------------------- evaluation

double value_of(double x) { return x; }
double value_of(Dual x) { return x.val; }

template <class T>
T apply_fn(Func fn, T a);

template <>
double apply_fn(Func fn, double a) {
  switch (fn) {
    case Func::Sin: return std::sin(a);
    case Func::Cos: return std::cos(a);
    case Func::Exp: return std::exp(a);
    case Func::Log:
      if (a <= 0.0) throw EvalError("log of a nonpositive value");
      return std::log(a);
    case Func::Sqrt:
      if (a < 0.0) throw EvalError("sqrt of a negative value");
      return std::sqrt(a);
  }
  return 0.0;
}

template <>
Dual apply_fn(Func fn, Dual a) {
  switch (fn) {
    case Func::Sin: return {std::sin(a.val), std::cos(a.val) * a.der};
    case Func::Cos: return {std::cos(a.val), -std::sin(a.val) * a.der};
    case Func::Exp: {
      double e = std::exp(a.val);
      return {e, e * a.der};
    }
    case Func::Log:
      if (a.val <= 0.0) throw EvalError("log of a nonpositive value");
      return {std::log(a.val), a.der / a.val};
    case Func::Sqrt: {
      if (a.val < 0.0) throw EvalError("sqrt of a negative value");
      double s = std::sqrt(a.val);
      if (s == 0.0 && a.der != 0.0) throw EvalError("sqrt not differentiable at 0");
      return {s, a.der == 0.0 ? 0.0 : a.der / (2.0 * s)};
    }
  }
  return {};
}

// Integer power by squaring; valid for negative bases, exact derivative.
template <class T>
T ipow(T base, long n) {
  if (n == 0) return T(1.0);
  bool neg = n < 0;
  unsigned long m = neg ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  T acc(1.0);
  T b = base;
  while (m > 0) {
    if (m & 1) acc = acc * b;
    b = b * b;
    m >>= 1;
  }
  if (neg) {
    if (value_of(base) == 0.0) throw EvalError("zero raised to a negative power");
    return T(1.0) / acc;
  }
  return acc;
}

double general_pow(double a, double b) {
  if (a <= 0.0) throw EvalError("non-integer power of a nonpositive base");
  return std::pow(a, b);
}

Dual general_pow(Dual a, Dual b) {
  if (a.val <= 0.0) throw EvalError("non-integer power of a nonpositive base");
  double v = std::pow(a.val, b.val);
  return {v, v * (b.der * std::log(a.val) + b.val * a.der / a.val)};
}

// Is this node a constant integer exponent we can handle with ipow?
bool integer_exponent(const Node* n, long* out) {
  if (n->kind != NodeKind::Constant) return false;
  double v = n->value;
  if (v != std::nearbyint(v) || std::fabs(v) > 1e6) return false;
  *out = static_cast<long>(v);
  return true;
}

template <class T>
T eval_node(const Node* n, const std::vector<T>& x) {
  switch (n->kind) {
    case NodeKind::Constant: return T(n->value);
    case NodeKind::Variable: return x[static_cast<size_t>(n->index)];
    case NodeKind::Neg: return -eval_node(n->lhs.get(), x);
    case NodeKind::Call: return apply_fn(n->fn, eval_node(n->lhs.get(), x));
    case NodeKind::Binary: {
      T a = eval_node(n->lhs.get(), x);
      switch (n->op) {
        case BinOp::Add: return a + eval_node(n->rhs.get(), x);
        case BinOp::Sub: return a - eval_node(n->rhs.get(), x);
        case BinOp::Mul: return a * eval_node(n->rhs.get(), x);
        case BinOp::Div: {
          T b = eval_node(n->rhs.get(), x);
          if (value_of(b) == 0.0) throw EvalError("division by zero");
          return a / b;
        }
        case BinOp::Pow: {
          long k;
          if (integer_exponent(n->rhs.get(), &k)) return ipow(a, k);
          return general_pow(a, eval_node(n->rhs.get(), x));
        }
      }
    }
  }
  return T(0.0);
}

void check_dim(const Expr& e, const Vec& x, const char* what) {
  if (static_cast<int>(x.size()) != e.dim())
    throw EvalError(std::string(what) + ": point has dimension " + std::to_string(x.size()) +
                    ", expression expects " + std::to_string(e.dim()));
}

}  // namespace

Expr::Expr(const Expr& other) : root_(clone(other.root_.get())), dim_(other.dim_) {}

Expr& Expr::operator=(const Expr& other) {
  if (this != &other) {
    root_ = clone(other.root_.get());
    dim_ = other.dim_;
  }
  return *this;
}

Expr parse(const std::string& text, int n) {
  Parser p(tokenize(text), n);
  return Expr(p.run(), n);
}

double eval(const Expr& e, const Vec& x) {
  check_dim(e, x, "eval");
  double v = eval_node(e.root(), x);
  if (!std::isfinite(v)) throw EvalError("expression evaluated to a non-finite value");
  return v;
}

Vec grad(const Expr& e, const Vec& x) {
  check_dim(e, x, "grad");
  std::vector<Dual> dx(x.size());
  for (size_t i = 0; i < x.size(); ++i) dx[i] = Dual(x[i], 0.0);
  Vec g(x.size(), 0.0);
  for (size_t i = 0; i < x.size(); ++i) {
    dx[i].der = 1.0;
    Dual r = eval_node(e.root(), dx);
    dx[i].der = 0.0;
    if (!std::isfinite(r.val) || !std::isfinite(r.der))
      throw EvalError("derivative evaluated to a non-finite value");
    g[i] = r.der;
  }
  return g;
}

Mat jacobian(const std::vector<Expr>& es, const Vec& x) {
  Mat J(static_cast<int>(es.size()), static_cast<int>(x.size()));
  for (size_t r = 0; r < es.size(); ++r) {
    Vec g = grad(es[r], x);
    for (size_t c = 0; c < x.size(); ++c) J(static_cast<int>(r), static_cast<int>(c)) = g[c];
  }
  return J;
}

namespace {

const char* fn_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

void print_node(const Node* n, std::string& out) {
  switch (n->kind) {
    case NodeKind::Constant: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", n->value);
      out += buf;
      return;
    }
    case NodeKind::Variable:
      out += "x" + std::to_string(n->index + 1);
      return;
    case NodeKind::Neg:
      out += "(-";
      print_node(n->lhs.get(), out);
      out += ")";
      return;
    case NodeKind::Call:
      out += fn_name(n->fn);
      out += "(";
      print_node(n->lhs.get(), out);
      out += ")";
      return;
    case NodeKind::Binary: {
      const char* op = "?";
      switch (n->op) {
        case BinOp::Add: op = " + "; break;
        case BinOp::Sub: op = " - "; break;
        case BinOp::Mul: op = " * "; break;
        case BinOp::Div: op = " / "; break;
        case BinOp::Pow: op = "^"; break;
      }
      out += "(";
      print_node(n->lhs.get(), out);
      out += op;
      print_node(n->rhs.get(), out);
      out += ")";
      return;
    }
  }
}

bool equal_node(const Node* a, const Node* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::Constant: return a->value == b->value;
    case NodeKind::Variable: return a->index == b->index;
    case NodeKind::Neg: return equal_node(a->lhs.get(), b->lhs.get());
    case NodeKind::Call:
      return a->fn == b->fn && equal_node(a->lhs.get(), b->lhs.get());
    case NodeKind::Binary:
      return a->op == b->op && equal_node(a->lhs.get(), b->lhs.get()) &&
             equal_node(a->rhs.get(), b->rhs.get());
  }
  return false;
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  if (e.root()) print_node(e.root(), out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  return a.dim() == b.dim() && equal_node(a.root(), b.root());
}

}  // namespace conekit
