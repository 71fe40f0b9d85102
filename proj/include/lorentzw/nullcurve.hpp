#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "lorentzw/expr.hpp"
#include "lorentzw/func.hpp"
#include "lorentzw/vec4.hpp"

namespace lorentzw {

enum class CurveKind { Type1, Type2 };

// Null curve in one of the two normal forms:
//   Type1: c'(t) = f(t) * (1, e1, e2, e3),        e_i in {-1,+1}
//   Type2: c'(t) = f(t) * (1+gh, g-h, 1-gh, g+h)
// Both tangents are algebraically null for any f, g, h.
// Positions are antiderivatives fixed by curve(t0) = 0.
class NullCurve {
 public:
  static NullCurve type1(FuncPtr f, int e1, int e2, int e3, double t_min,
                         double t_max, double t0 = 0.0);
  static NullCurve type2(FuncPtr f, FuncPtr g, FuncPtr h, double t_min,
                         double t_max, double t0 = 0.0);

  CurveKind kind() const { return kind_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  double t0() const { return t0_; }
  bool contains(double t) const { return t > t_min_ && t < t_max_; }

  const FuncPtr& f() const { return f_; }
  const FuncPtr& g() const { return g_; }  // Type2 only (null otherwise)
  const FuncPtr& h() const { return h_; }
  const int* eps() const { return eps_; }  // Type1 only

  Vec4 derivative(double t) const;
  Vec4 second_derivative(double t) const;

  // integral of derivative from t0 to t; adaptive quadrature with results
  // cached on a knot grid of step (t_max-t_min)/1024 so that grid sweeps
  // cost one short integral per call after warm-up
  Vec4 position(double t, double quad_tol = 1e-10) const;

 private:
  NullCurve() = default;
  void validate() const;

  CurveKind kind_ = CurveKind::Type2;
  FuncPtr f_, g_, h_;
  int eps_[3] = {1, 1, 1};
  double t_min_ = 0.0, t_max_ = 0.0, t0_ = 0.0;

  struct Cache {
    std::mutex mu;
    std::map<long, Vec4> prefix;  // knot index -> integral t0..knot
  };
  std::shared_ptr<Cache> cache_;
};

// Derivative vector of the mirrored normal form
//   f * (1+gh, g-h, g+h, 1-gh)
// which differs from Type2 by swapping the last two components.
Vec4 case_b_derivative(const expr::Expr& f, const expr::Expr& g,
                       const expr::Expr& h, double t);

struct CaseAForm {
  expr::Expr f, g, h;
};

// Rewrite mirrored-form data (f,g,h) into Type2 data via
//   g~ = (1-h)/(1+h), h~ = (1-g)/(1+g), f~ = 2f/((1+h~)(1+g~)).
// Checked on a dense sample of [t_min, t_max]: 1+g and 1+h must not
// vanish, and the two derivative vectors must agree.
CaseAForm convert_case_b_to_a(const expr::Expr& f, const expr::Expr& g,
                              const expr::Expr& h, double t_min, double t_max);

}  // namespace lorentzw
