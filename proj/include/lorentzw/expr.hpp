#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "lorentzw/errors.hpp"

namespace lorentzw::expr {

enum class FuncKind { Sin, Cos, Sinh, Cosh, Tanh, Exp, Ln, Sqrt, Abs, Sign };
enum class BinOp { Add, Sub, Mul, Div, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Tag { Literal, Var, Neg, Func, Bin };
  Tag tag;
  double value = 0.0;  // Literal
  FuncKind func{};     // Func
  BinOp op{};          // Bin
  NodePtr a, b;        // Neg/Func use a; Bin uses a,b
};

/// Immutable single-variable expression over `t`. Copy is cheap (shared AST).
class Expr {
 public:
  Expr() : root_(literal_node(0.0)) {}
  explicit Expr(NodePtr n) : root_(std::move(n)) {}

  static Expr literal(double v) { return Expr(literal_node(v)); }
  static Expr var();

  /// Evaluate at t. Throws DomainError instead of producing NaN/Inf.
  double eval(double t) const;

  /// Symbolic derivative, simplified by constant folding and the identity
  /// rules 0+x, x+0, x-0, 0-x, 1*x, x*1, 0*x, x*0, x/1, x^1, x^0.
  Expr derivative() const;

  /// Rebuild through the folding constructors (parse itself never folds, so
  /// the raw and folded trees can be compared against each other).
  Expr simplified() const;

  /// Minimal-parenthesis rendering; parse(str()) reproduces the string.
  std::string str() const;

  const NodePtr& root() const { return root_; }

 private:
  static NodePtr literal_node(double v);
  NodePtr root_;
};

/// Parse the documented grammar. Throws SyntaxError (byte offset + expected
/// token classes) or UnknownIdentifier.
Expr parse(std::string_view text);

// Simplifying node constructors, shared with the differentiator. Exposed for
// programmatic expression building (case conversion, canonical weights).
NodePtr mk_lit(double v);
NodePtr mk_var();
NodePtr mk_neg(NodePtr a);
NodePtr mk_add(NodePtr a, NodePtr b);
NodePtr mk_sub(NodePtr a, NodePtr b);
NodePtr mk_mul(NodePtr a, NodePtr b);
NodePtr mk_div(NodePtr a, NodePtr b);
NodePtr mk_pow(NodePtr a, NodePtr b);
NodePtr mk_func(FuncKind f, NodePtr a);

}  // namespace lorentzw::expr
