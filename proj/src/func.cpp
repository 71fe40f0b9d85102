#include "lorentzw/func.hpp"

#include <cmath>
#include <utility>

#include "lorentzw/errors.hpp"

namespace lorentzw {

ExprFunc::ExprFunc(expr::Expr e)
    : e_(std::move(e)), d1_(e_.derivative()), d2_(d1_.derivative()) {}

FuncPtr ExprFunc::parse(std::string_view text) {
  return std::make_shared<ExprFunc>(expr::parse(text));
}

double ExprFunc::value(double t) const { return e_.eval(t); }
double ExprFunc::deriv(double t) const { return d1_.eval(t); }
double ExprFunc::deriv2(double t) const { return d2_.eval(t); }
std::string ExprFunc::describe() const { return e_.str(); }

FuncPtr make_constant(double c) {
  return std::make_shared<ExprFunc>(expr::Expr::literal(c));
}

CanonicalWeight::CanonicalWeight(FuncPtr g, FuncPtr h)
    : g_(std::move(g)), h_(std::move(h)) {}

double CanonicalWeight::product(double t) const {
  const double p = g_->deriv(t) * h_->deriv(t);
  if (std::abs(p) < 1e-300)
    throw DomainError("canonical weight hit a zero of g'*h'", "g'*h'", t);
  return p;
}

double CanonicalWeight::value(double t) const {
  return 0.25 / std::sqrt(std::abs(product(t)));
}

double CanonicalWeight::deriv(double t) const {
  // d/dt (1/4)|P|^{-1/2} = -(1/8) sgn(P) P' |P|^{-3/2},  P = g'h'
  const double p = product(t);
  const double dp = g_->deriv2(t) * h_->deriv(t) + g_->deriv(t) * h_->deriv2(t);
  const double s = p > 0 ? 1.0 : -1.0;
  return -0.125 * s * dp / std::pow(std::abs(p), 1.5);
}

double CanonicalWeight::deriv2(double) const {
  throw Error("CanonicalWeight::deriv2 needs third derivatives of g and h");
}

std::string CanonicalWeight::describe() const {
  return "1/(4*sqrt(abs((" + g_->describe() + ")'*(" + h_->describe() + ")')))";
}

ComposedFunc::ComposedFunc(FuncPtr base, FuncPtr map)
    : base_(std::move(base)), map_(std::move(map)) {}

double ComposedFunc::value(double t) const { return base_->value(map_->value(t)); }

double ComposedFunc::deriv(double t) const {
  const double p = map_->value(t);
  return base_->deriv(p) * map_->deriv(t);
}

double ComposedFunc::deriv2(double t) const {
  const double p = map_->value(t);
  const double dp = map_->deriv(t);
  return base_->deriv2(p) * dp * dp + base_->deriv(p) * map_->deriv2(t);
}

std::string ComposedFunc::describe() const {
  return "(" + base_->describe() + ") o (" + map_->describe() + ")";
}

expr::Expr symbolic_canonical_weight(const expr::Expr& g, const expr::Expr& h) {
  using namespace expr;
  const NodePtr gp = g.derivative().root();
  const NodePtr hp = h.derivative().root();
  const NodePtr prod = mk_func(FuncKind::Abs, mk_mul(gp, hp));
  const NodePtr denom = mk_mul(Expr::literal(4).root(), mk_func(FuncKind::Sqrt, prod));
  return Expr(mk_div(Expr::literal(1).root(), denom));
}

}  // namespace lorentzw
