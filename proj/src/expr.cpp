#include "lorentzw/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace lorentzw::expr {

namespace {

struct FuncInfo {
  const char* name;
  FuncKind kind;
};

constexpr std::array<FuncInfo, 10> kFuncs{{{"sin", FuncKind::Sin},
                                           {"cos", FuncKind::Cos},
                                           {"sinh", FuncKind::Sinh},
                                           {"cosh", FuncKind::Cosh},
                                           {"tanh", FuncKind::Tanh},
                                           {"exp", FuncKind::Exp},
                                           {"ln", FuncKind::Ln},
                                           {"sqrt", FuncKind::Sqrt},
                                           {"abs", FuncKind::Abs},
                                           {"sign", FuncKind::Sign}}};

const char* func_name(FuncKind k) {
  for (const auto& f : kFuncs)
    if (f.kind == k) return f.name;
  return "?";
}

std::optional<FuncKind> func_by_name(std::string_view s) {
  for (const auto& f : kFuncs)
    if (s == f.name) return f.kind;
  return std::nullopt;
}

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

bool is_lit(const NodePtr& n, double v) {
  return n->tag == Node::Tag::Literal && n->value == v;
}

std::string render(const NodePtr& n);

double eval_node(const Node& n, double t);

[[noreturn]] void domain_fail(const Node& n, double arg, const std::string& what) {
  NodePtr self(&n, [](const Node*) {});  // non-owning view for rendering
  throw DomainError(what + " in '" + render(self) + "' (argument " + std::to_string(arg) + ")",
                    render(self), arg);
}

double check_finite(const Node& n, double arg, double r) {
  if (!std::isfinite(r)) domain_fail(n, arg, "non-finite result");
  return r;
}

double eval_func(const Node& n, double t) {
  const double u = eval_node(*n.a, t);
  switch (n.func) {
    case FuncKind::Sin: return std::sin(u);
    case FuncKind::Cos: return std::cos(u);
    case FuncKind::Sinh: return check_finite(n, u, std::sinh(u));
    case FuncKind::Cosh: return check_finite(n, u, std::cosh(u));
    case FuncKind::Tanh: return std::tanh(u);
    case FuncKind::Exp: return check_finite(n, u, std::exp(u));
    case FuncKind::Ln:
      if (u <= 0.0) domain_fail(n, u, "logarithm of a non-positive value");
      return check_finite(n, u, std::log(u));
    case FuncKind::Sqrt:
      if (u < 0.0) domain_fail(n, u, "square root of a negative value");
      return std::sqrt(u);
    case FuncKind::Abs: return std::abs(u);
    case FuncKind::Sign:
      if (u == 0.0) domain_fail(n, u, "sign at zero (kink of abs)");
      return u > 0.0 ? 1.0 : -1.0;
  }
  domain_fail(n, u, "unreachable function kind");
}

bool integral_exponent(double e) {
  return std::floor(e) == e && std::abs(e) < 9.007199254740992e15;
}

double eval_bin(const Node& n, double t) {
  const double a = eval_node(*n.a, t);
  const double b = eval_node(*n.b, t);
  switch (n.op) {
    case BinOp::Add: return check_finite(n, a, a + b);
    case BinOp::Sub: return check_finite(n, a, a - b);
    case BinOp::Mul: return check_finite(n, a, a * b);
    case BinOp::Div:
      if (b == 0.0) domain_fail(n, b, "division by zero");
      return check_finite(n, b, a / b);
    case BinOp::Pow:
      if (a == 0.0 && b < 0.0) domain_fail(n, b, "zero raised to a negative power");
      if (a < 0.0 && !integral_exponent(b))
        domain_fail(n, a, "negative base with non-integer exponent");
      return check_finite(n, a, std::pow(a, b));
  }
  domain_fail(n, a, "unreachable operator");
}

double eval_node(const Node& n, double t) {
  switch (n.tag) {
    case Node::Tag::Literal: return n.value;
    case Node::Tag::Var: return t;
    case Node::Tag::Neg: return -eval_node(*n.a, t);
    case Node::Tag::Func: return eval_func(n, t);
    case Node::Tag::Bin: return eval_bin(n, t);
  }
  return 0.0;
}

// ---- printing --------------------------------------------------------------

// Precedence levels: Add/Sub 1, Mul/Div 2, unary minus 3, Pow 4, atoms 5.
int precedence(const Node& n) {
  switch (n.tag) {
    case Node::Tag::Bin:
      switch (n.op) {
        case BinOp::Add:
        case BinOp::Sub: return 1;
        case BinOp::Mul:
        case BinOp::Div: return 2;
        case BinOp::Pow: return 4;
      }
      return 1;
    case Node::Tag::Neg: return 3;
    default: return 5;
  }
}

std::string lit_str(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

void render_to(const NodePtr& n, int min_prec, std::string& out) {
  const int p = precedence(*n);
  const bool parens = p < min_prec;
  if (parens) out += '(';
  switch (n->tag) {
    case Node::Tag::Literal:
      if (n->value < 0.0 || std::signbit(n->value)) {
        // negative literals print through unary minus so the string reparses
        out += '-';
        out += lit_str(-n->value);
      } else {
        out += lit_str(n->value);
      }
      break;
    case Node::Tag::Var: out += 't'; break;
    case Node::Tag::Neg:
      out += '-';
      render_to(n->a, 3, out);
      break;
    case Node::Tag::Func:
      out += func_name(n->func);
      out += '(';
      render_to(n->a, 0, out);
      out += ')';
      break;
    case Node::Tag::Bin: {
      const char* op = nullptr;
      int lp = p, rp = p + 1;  // left-assoc: right child needs strictly higher
      switch (n->op) {
        case BinOp::Add: op = "+"; break;
        case BinOp::Sub: op = "-"; break;
        case BinOp::Mul: op = "*"; break;
        case BinOp::Div: op = "/"; break;
        case BinOp::Pow:
          op = "^";
          lp = p + 1;  // right-assoc: parenthesize a nested base instead
          rp = 3;      // exponent position admits unary minus unparenthesized
          break;
      }
      render_to(n->a, lp, out);
      out += op;
      render_to(n->b, rp, out);
      break;
    }
  }
  if (parens) out += ')';
}

std::string render(const NodePtr& n) {
  std::string out;
  render_to(n, 0, out);
  return out;
}

// A literal whose negation appears literally: for printing -x as Neg.
}  // namespace

// ---- simplifying constructors ----------------------------------------------

NodePtr mk_lit(double v) { return make({Node::Tag::Literal, v, {}, {}, nullptr, nullptr}); }
NodePtr mk_var() { return make({Node::Tag::Var, 0.0, {}, {}, nullptr, nullptr}); }

namespace {
std::optional<double> try_eval_const(const Node& n) {
  try {
    return eval_node(n, 0.0);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}
bool is_literal(const NodePtr& n) { return n->tag == Node::Tag::Literal; }
}  // namespace

NodePtr mk_neg(NodePtr a) {
  if (is_literal(a)) return mk_lit(-a->value);
  if (a->tag == Node::Tag::Neg) return a->a;
  return make({Node::Tag::Neg, 0.0, {}, {}, std::move(a), nullptr});
}

NodePtr mk_add(NodePtr a, NodePtr b) {
  if (is_lit(a, 0.0)) return b;
  if (is_lit(b, 0.0)) return a;
  Node n{Node::Tag::Bin, 0.0, {}, BinOp::Add, std::move(a), std::move(b)};
  if (is_literal(n.a) && is_literal(n.b))
    if (auto v = try_eval_const(n)) return mk_lit(*v);
  return make(std::move(n));
}

NodePtr mk_sub(NodePtr a, NodePtr b) {
  if (is_lit(b, 0.0)) return a;
  if (is_lit(a, 0.0)) return mk_neg(std::move(b));
  Node n{Node::Tag::Bin, 0.0, {}, BinOp::Sub, std::move(a), std::move(b)};
  if (is_literal(n.a) && is_literal(n.b))
    if (auto v = try_eval_const(n)) return mk_lit(*v);
  return make(std::move(n));
}

NodePtr mk_mul(NodePtr a, NodePtr b) {
  if (is_lit(a, 0.0) || is_lit(b, 0.0)) return mk_lit(0.0);
  if (is_lit(a, 1.0)) return b;
  if (is_lit(b, 1.0)) return a;
  Node n{Node::Tag::Bin, 0.0, {}, BinOp::Mul, std::move(a), std::move(b)};
  if (is_literal(n.a) && is_literal(n.b))
    if (auto v = try_eval_const(n)) return mk_lit(*v);
  return make(std::move(n));
}

NodePtr mk_div(NodePtr a, NodePtr b) {
  if (is_lit(b, 1.0)) return a;
  Node n{Node::Tag::Bin, 0.0, {}, BinOp::Div, std::move(a), std::move(b)};
  if (is_literal(n.a) && is_literal(n.b))
    if (auto v = try_eval_const(n)) return mk_lit(*v);
  return make(std::move(n));
}

NodePtr mk_pow(NodePtr a, NodePtr b) {
  if (is_lit(b, 1.0)) return a;
  if (is_lit(b, 0.0)) return mk_lit(1.0);
  Node n{Node::Tag::Bin, 0.0, {}, BinOp::Pow, std::move(a), std::move(b)};
  if (is_literal(n.a) && is_literal(n.b))
    if (auto v = try_eval_const(n)) return mk_lit(*v);
  return make(std::move(n));
}

NodePtr mk_func(FuncKind f, NodePtr a) {
  Node n{Node::Tag::Func, 0.0, f, {}, std::move(a), nullptr};
  if (is_literal(n.a))
    if (auto v = try_eval_const(n)) return mk_lit(*v);
  return make(std::move(n));
}

// ---- Expr ------------------------------------------------------------------

NodePtr Expr::literal_node(double v) { return mk_lit(v); }
Expr Expr::var() { return Expr(mk_var()); }

double Expr::eval(double t) const { return eval_node(*root_, t); }

namespace {

NodePtr diff(const NodePtr& n);

NodePtr diff_func(const NodePtr& n) {
  const NodePtr& u = n->a;
  NodePtr du = diff(u);
  switch (n->func) {
    case FuncKind::Sin: return mk_mul(mk_func(FuncKind::Cos, u), du);
    case FuncKind::Cos: return mk_neg(mk_mul(mk_func(FuncKind::Sin, u), du));
    case FuncKind::Sinh: return mk_mul(mk_func(FuncKind::Cosh, u), du);
    case FuncKind::Cosh: return mk_mul(mk_func(FuncKind::Sinh, u), du);
    case FuncKind::Tanh:
      return mk_mul(mk_sub(mk_lit(1.0), mk_pow(mk_func(FuncKind::Tanh, u), mk_lit(2.0))), du);
    case FuncKind::Exp: return mk_mul(mk_func(FuncKind::Exp, u), du);
    case FuncKind::Ln: return mk_div(du, u);
    case FuncKind::Sqrt: return mk_div(du, mk_mul(mk_lit(2.0), mk_func(FuncKind::Sqrt, u)));
    case FuncKind::Abs:
      // non-smooth at u = 0; the sign node reports the kink on evaluation
      return mk_mul(mk_func(FuncKind::Sign, u), du);
    case FuncKind::Sign: return mk_lit(0.0);
  }
  return mk_lit(0.0);
}

NodePtr diff(const NodePtr& n) {
  switch (n->tag) {
    case Node::Tag::Literal: return mk_lit(0.0);
    case Node::Tag::Var: return mk_lit(1.0);
    case Node::Tag::Neg: return mk_neg(diff(n->a));
    case Node::Tag::Func: return diff_func(n);
    case Node::Tag::Bin: {
      const NodePtr& u = n->a;
      const NodePtr& v = n->b;
      switch (n->op) {
        case BinOp::Add: return mk_add(diff(u), diff(v));
        case BinOp::Sub: return mk_sub(diff(u), diff(v));
        case BinOp::Mul: return mk_add(mk_mul(diff(u), v), mk_mul(u, diff(v)));
        case BinOp::Div:
          return mk_div(mk_sub(mk_mul(diff(u), v), mk_mul(u, diff(v))),
                        mk_pow(v, mk_lit(2.0)));
        case BinOp::Pow:
          if (v->tag == Node::Tag::Literal) {
            // power rule; for integer exponents valid on negative bases too
            return mk_mul(mk_mul(mk_lit(v->value), mk_pow(u, mk_lit(v->value - 1.0))),
                          diff(u));
          }
          // general case u^v = exp(v ln u), defined for u > 0
          return mk_mul(mk_pow(u, v),
                        mk_add(mk_mul(diff(v), mk_func(FuncKind::Ln, u)),
                               mk_div(mk_mul(v, diff(u)), u)));
      }
    }
  }
  return mk_lit(0.0);
}

}  // namespace

Expr Expr::derivative() const { return Expr(diff(root_)); }

namespace {
NodePtr fold(const NodePtr& n) {
  switch (n->tag) {
    case Node::Tag::Literal: return mk_lit(n->value);
    case Node::Tag::Var: return mk_var();
    case Node::Tag::Neg: return mk_neg(fold(n->a));
    case Node::Tag::Func: return mk_func(n->func, fold(n->a));
    case Node::Tag::Bin: {
      NodePtr a = fold(n->a), b = fold(n->b);
      switch (n->op) {
        case BinOp::Add: return mk_add(std::move(a), std::move(b));
        case BinOp::Sub: return mk_sub(std::move(a), std::move(b));
        case BinOp::Mul: return mk_mul(std::move(a), std::move(b));
        case BinOp::Div: return mk_div(std::move(a), std::move(b));
        case BinOp::Pow: return mk_pow(std::move(a), std::move(b));
      }
    }
  }
  return n;
}
}  // namespace

Expr Expr::simplified() const { return Expr(fold(root_)); }

std::string Expr::str() const { return render(root_); }

// ---- parser ----------------------------------------------------------------

namespace {

struct Token {
  enum class Kind { Number, Var, Func, LParen, RParen, Plus, Minus, Star, Slash, Caret, End };
  Kind kind;
  std::size_t offset;
  double value = 0.0;  // Number
  FuncKind func{};     // Func
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::size_t off = pos_;
    if (pos_ >= s_.size()) return {Token::Kind::End, off};
    const char c = s_[pos_];
    switch (c) {
      case '(': ++pos_; return {Token::Kind::LParen, off};
      case ')': ++pos_; return {Token::Kind::RParen, off};
      case '+': ++pos_; return {Token::Kind::Plus, off};
      case '-': ++pos_; return {Token::Kind::Minus, off};
      case '*': ++pos_; return {Token::Kind::Star, off};
      case '/': ++pos_; return {Token::Kind::Slash, off};
      case '^': ++pos_; return {Token::Kind::Caret, off};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(off);
    if (std::isalpha(static_cast<unsigned char>(c))) return lex_ident(off);
    throw SyntaxError("unexpected character '" + std::string(1, c) + "' at offset " +
                          std::to_string(off),
                      off, {"number", "'t'", "function", "operator", "'('", "')'"});
  }

 private:
  Token lex_number(std::size_t off) {
    std::size_t p = pos_;
    bool digits = false;
    while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) { ++p; digits = true; }
    if (p < s_.size() && s_[p] == '.') {
      ++p;
      while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) { ++p; digits = true; }
    }
    if (!digits)
      throw SyntaxError("malformed number at offset " + std::to_string(off), off, {"number"});
    if (p < s_.size() && (s_[p] == 'e' || s_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        ++q;
        while (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) ++q;
        p = q;
      }
    }
    double v = 0.0;
    const std::string text(s_.substr(off, p - off));
    // strtod accepts exactly the forms scanned above
    char* end = nullptr;
    v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size())
      throw SyntaxError("malformed number at offset " + std::to_string(off), off, {"number"});
    pos_ = p;
    return {Token::Kind::Number, off, v};
  }

  Token lex_ident(std::size_t off) {
    std::size_t p = pos_;
    while (p < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p])) || s_[p] == '_')) ++p;
    const std::string_view name = s_.substr(off, p - off);
    pos_ = p;
    if (name == "t") return {Token::Kind::Var, off};
    if (auto f = func_by_name(name)) return {Token::Kind::Func, off, 0.0, *f};
    throw UnknownIdentifier("unknown identifier '" + std::string(name) + "' at offset " +
                                std::to_string(off),
                            off, std::string(name));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : lex_(s) { advance(); }

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    if (cur_.kind != Token::Kind::End)
      throw SyntaxError("expected operator or end of input at offset " +
                            std::to_string(cur_.offset),
                        cur_.offset, {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (cur_.kind == Token::Kind::Plus) {
        advance();
        lhs = raw_bin(BinOp::Add, lhs, parse_term());
      } else if (cur_.kind == Token::Kind::Minus) {
        advance();
        lhs = raw_bin(BinOp::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (cur_.kind == Token::Kind::Star) {
        advance();
        lhs = raw_bin(BinOp::Mul, lhs, parse_factor());
      } else if (cur_.kind == Token::Kind::Slash) {
        advance();
        lhs = raw_bin(BinOp::Div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  // unary minus binds between '*' and '^': -t^2 is -(t^2)
  NodePtr parse_factor() {
    if (cur_.kind == Token::Kind::Minus) {
      advance();
      return make({Node::Tag::Neg, 0.0, {}, {}, parse_factor(), nullptr});
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (cur_.kind == Token::Kind::Caret) {
      advance();
      return raw_bin(BinOp::Pow, base, parse_factor());  // right-assoc, allows t^-2
    }
    return base;
  }

  NodePtr parse_primary() {
    switch (cur_.kind) {
      case Token::Kind::Number: {
        const double v = cur_.value;
        advance();
        return mk_lit(v);
      }
      case Token::Kind::Var:
        advance();
        return mk_var();
      case Token::Kind::Func: {
        const FuncKind f = cur_.func;
        advance();
        if (cur_.kind != Token::Kind::LParen)
          throw SyntaxError("expected '(' after function name at offset " +
                                std::to_string(cur_.offset),
                            cur_.offset, {"'('"});
        advance();
        NodePtr arg = parse_expr();
        expect_rparen();
        return make({Node::Tag::Func, 0.0, f, {}, std::move(arg), nullptr});
      }
      case Token::Kind::LParen: {
        advance();
        NodePtr e = parse_expr();
        expect_rparen();
        return e;
      }
      default:
        throw SyntaxError("expected expression at offset " + std::to_string(cur_.offset),
                          cur_.offset, {"number", "'t'", "function", "'('", "'-'"});
    }
  }

  void expect_rparen() {
    if (cur_.kind != Token::Kind::RParen)
      throw SyntaxError("expected ')' at offset " + std::to_string(cur_.offset), cur_.offset,
                        {"')'"});
    advance();
  }

  static NodePtr raw_bin(BinOp op, NodePtr a, NodePtr b) {
    return make({Node::Tag::Bin, 0.0, {}, op, std::move(a), std::move(b)});
  }

  Lexer lex_;
  Token cur_{Token::Kind::End, 0};
};

}  // namespace

Expr parse(std::string_view text) { return Expr(Parser(text).parse_all()); }

}  // namespace lorentzw::expr
