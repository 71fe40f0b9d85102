#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "lorentzw/expr.hpp"

namespace lorentzw {

// Scalar function of one real variable carrying two derivatives.
// Implementations throw DomainError outside their domain, never NaN.
class ScalarFunc {
 public:
  virtual ~ScalarFunc() = default;
  virtual double value(double t) const = 0;
  virtual double deriv(double t) const = 0;
  virtual double deriv2(double t) const = 0;
  virtual std::string describe() const = 0;
};

using FuncPtr = std::shared_ptr<const ScalarFunc>;

// Symbolic expression; both derivatives are taken once, at construction.
class ExprFunc final : public ScalarFunc {
 public:
  explicit ExprFunc(expr::Expr e);
  static FuncPtr parse(std::string_view text);

  double value(double t) const override;
  double deriv(double t) const override;
  double deriv2(double t) const override;
  std::string describe() const override;

  const expr::Expr& expression() const { return e_; }

 private:
  expr::Expr e_, d1_, d2_;
};

FuncPtr make_constant(double c);

// Weight 1/(4*sqrt(|g' h'|)) over arbitrary ScalarFuncs. Its first
// derivative needs g'' and h''; the second would need third derivatives,
// which the interface does not carry, so deriv2 throws.
class CanonicalWeight final : public ScalarFunc {
 public:
  CanonicalWeight(FuncPtr g, FuncPtr h);

  double value(double t) const override;
  double deriv(double t) const override;
  double deriv2(double t) const override;
  std::string describe() const override;

 private:
  double product(double t) const;  // g'(t) h'(t), throws if ~0
  FuncPtr g_, h_;
};

// base(map(t)); derivatives by the chain rule.
class ComposedFunc final : public ScalarFunc {
 public:
  ComposedFunc(FuncPtr base, FuncPtr map);

  double value(double t) const override;
  double deriv(double t) const override;
  double deriv2(double t) const override;
  std::string describe() const override;

 private:
  FuncPtr base_, map_;
};

// The expression 1/(4*sqrt(abs(g'*h'))) built from symbolic g, h. Keeping
// the weight symbolic gives exact derivatives of every order.
expr::Expr symbolic_canonical_weight(const expr::Expr& g, const expr::Expr& h);

}  // namespace lorentzw
