#include "lorentzw/nullcurve.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "lorentzw/errors.hpp"
#include "lorentzw/quadrature.hpp"

namespace lorentzw {

namespace {
constexpr int kValidationSamples = 4096;
constexpr long kKnotCount = 1024;
}  // namespace

NullCurve NullCurve::type1(FuncPtr f, int e1, int e2, int e3, double t_min,
                           double t_max, double t0) {
  for (int e : {e1, e2, e3})
    if (e != 1 && e != -1) throw ConstructionError("type1 signs must be -1 or +1");
  NullCurve c;
  c.kind_ = CurveKind::Type1;
  c.f_ = std::move(f);
  c.eps_[0] = e1;
  c.eps_[1] = e2;
  c.eps_[2] = e3;
  c.t_min_ = t_min;
  c.t_max_ = t_max;
  c.t0_ = t0;
  c.cache_ = std::make_shared<Cache>();
  c.validate();
  return c;
}

NullCurve NullCurve::type2(FuncPtr f, FuncPtr g, FuncPtr h, double t_min,
                           double t_max, double t0) {
  NullCurve c;
  c.kind_ = CurveKind::Type2;
  c.f_ = std::move(f);
  c.g_ = std::move(g);
  c.h_ = std::move(h);
  c.t_min_ = t_min;
  c.t_max_ = t_max;
  c.t0_ = t0;
  c.cache_ = std::make_shared<Cache>();
  c.validate();
  return c;
}

// Dense-sample soundness check, not a proof: f must keep one sign and stay
// away from zero, every component must evaluate, and the tangent must be
// null at each of the 4096 sample points.
void NullCurve::validate() const {
  if (!(t_min_ < t_max_) || !std::isfinite(t_min_) || !std::isfinite(t_max_))
    throw ConstructionError("curve domain must be a finite nonempty interval");
  if (t0_ < t_min_ || t0_ > t_max_)
    throw ConstructionError("base point t0 must lie in the domain");
  if (!f_) throw ConstructionError("missing weight function f");
  if (kind_ == CurveKind::Type2 && (!g_ || !h_))
    throw ConstructionError("Type2 curve needs g and h");

  const double step = (t_max_ - t_min_) / kValidationSamples;
  double fmax = 0.0, fmin = HUGE_VAL;
  bool sign_flip = false;
  double prev = 0.0;
  for (int i = 0; i < kValidationSamples; ++i) {
    const double t = t_min_ + (i + 0.5) * step;
    double fv;
    try {
      fv = f_->value(t);
      if (!is_null(derivative(t), 1e-10)) {
        std::ostringstream os;
        os << "tangent fails the null condition at t=" << t;
        throw ConstructionError(os.str());
      }
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << "curve data not evaluable at sample t=" << t << ": " << e.what();
      throw ConstructionError(os.str());
    }
    fmax = std::max(fmax, std::abs(fv));
    fmin = std::min(fmin, std::abs(fv));
    if (i > 0 && ((prev < 0.0) != (fv < 0.0))) sign_flip = true;
    prev = fv;
  }
  if (sign_flip || fmin <= 1e-12 * std::max(1.0, fmax))
    throw ConstructionError("weight f vanishes on the sampled domain");
}

Vec4 NullCurve::derivative(double t) const {
  const double fv = f_->value(t);
  if (kind_ == CurveKind::Type1)
    return Vec4{fv, fv * eps_[0], fv * eps_[1], fv * eps_[2]};
  const double gv = g_->value(t);
  const double hv = h_->value(t);
  return Vec4{fv * (1 + gv * hv), fv * (gv - hv), fv * (1 - gv * hv), fv * (gv + hv)};
}

Vec4 NullCurve::second_derivative(double t) const {
  const double fv = f_->value(t);
  const double dfv = f_->deriv(t);
  if (kind_ == CurveKind::Type1)
    return Vec4{dfv, dfv * eps_[0], dfv * eps_[1], dfv * eps_[2]};
  const double gv = g_->value(t), dgv = g_->deriv(t);
  const double hv = h_->value(t), dhv = h_->deriv(t);
  const double gh = gv * hv, dgh = dgv * hv + gv * dhv;
  return Vec4{dfv * (1 + gh) + fv * dgh, dfv * (gv - hv) + fv * (dgv - dhv),
              dfv * (1 - gh) - fv * dgh, dfv * (gv + hv) + fv * (dgv + dhv)};
}

Vec4 NullCurve::position(double t, double quad_tol) const {
  if (!(t >= t_min_ && t <= t_max_)) {
    std::ostringstream os;
    os << "position argument " << t << " outside curve domain";
    throw DomainError(os.str(), "position(t)", t);
  }
  const Integrand f = [this](double s) { return derivative(s); };
  const double delta = (t_max_ - t_min_) / kKnotCount;
  const double prefix_tol = std::min(quad_tol, 1e-12);

  long i = std::lround((t - t0_) / delta);
  while (t0_ + i * delta > t_max_) --i;
  while (t0_ + i * delta < t_min_) ++i;
  const double ti = t0_ + i * delta;

  Vec4 base;
  bool have_base = false;
  long from = 0;
  Vec4 from_value{};
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (cache_->prefix.empty()) cache_->prefix.emplace(0, Vec4{});
    auto it = cache_->prefix.find(i);
    if (it != cache_->prefix.end()) {
      base = it->second;
      have_base = true;
    } else {
      // nearest cached knot keeps the remaining integral short
      auto lo = cache_->prefix.lower_bound(i);
      if (lo == cache_->prefix.end())
        --lo;
      else if (lo != cache_->prefix.begin()) {
        auto below = std::prev(lo);
        if (i - below->first < lo->first - i) lo = below;
      }
      from = lo->first;
      from_value = lo->second;
    }
  }
  if (!have_base) {
    base = from_value +
           integrate(f, t0_ + from * delta, ti, prefix_tol).value;
    std::lock_guard<std::mutex> lock(cache_->mu);
    cache_->prefix.emplace(i, base);  // idempotent: recomputation ties out
  }
  return base + integrate(f, ti, t, quad_tol).value;
}

Vec4 case_b_derivative(const expr::Expr& f, const expr::Expr& g,
                       const expr::Expr& h, double t) {
  const double fv = f.eval(t), gv = g.eval(t), hv = h.eval(t);
  return Vec4{fv * (1 + gv * hv), fv * (gv - hv), fv * (gv + hv), fv * (1 - gv * hv)};
}

CaseAForm convert_case_b_to_a(const expr::Expr& f, const expr::Expr& g,
                              const expr::Expr& h, double t_min, double t_max) {
  using namespace expr;
  const NodePtr one = Expr::literal(1).root();

  const double step = (t_max - t_min) / kValidationSamples;
  for (int i = 0; i < kValidationSamples; ++i) {
    const double t = t_min + (i + 0.5) * step;
    double gv, hv;
    try {
      gv = g.eval(t);
      hv = h.eval(t);
    } catch (const DomainError& e) {
      throw ConstructionError(std::string("data not evaluable on sample: ") + e.what());
    }
    if (std::abs(1 + gv) < 1e-12 || std::abs(1 + hv) < 1e-12) {
      std::ostringstream os;
      os << "substitution pole (1+g or 1+h vanishes) at t=" << t;
      throw ConstructionError(os.str());
    }
  }

  const NodePtr gt = mk_div(mk_sub(one, h.root()), mk_add(one, h.root()));
  const NodePtr ht = mk_div(mk_sub(one, g.root()), mk_add(one, g.root()));
  const NodePtr ft = mk_div(mk_mul(Expr::literal(2).root(), f.root()),
                            mk_mul(mk_add(one, ht), mk_add(one, gt)));
  return CaseAForm{Expr(ft), Expr(gt), Expr(ht)};
}

}  // namespace lorentzw
