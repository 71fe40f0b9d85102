#include "lorentzw/surface.hpp"

#include <cmath>
#include <sstream>

#include "lorentzw/errors.hpp"

namespace lorentzw {

namespace {

bool both_type2(const WeierstrassSurface& S) {
  return S.beta.kind() == CurveKind::Type2 && S.theta.kind() == CurveKind::Type2;
}

void require_domain(const WeierstrassSurface& S, double u, double v) {
  if (!S.in_domain(u, v)) {
    std::ostringstream os;
    os << "(" << u << ", " << v << ") leaves the curve domains";
    throw DomainError(os.str(), "u+v / u-v", u + v);
  }
}

}  // namespace

Vec4 eval_point(const WeierstrassSurface& S, double u, double v, double quad_tol) {
  require_domain(S, u, v);
  return S.beta.position(u + v, quad_tol) + S.theta.position(u - v, quad_tol);
}

std::pair<Vec4, Vec4> tangents(const WeierstrassSurface& S, double u, double v) {
  require_domain(S, u, v);
  const Vec4 db = S.beta.derivative(u + v);
  const Vec4 dt = S.theta.derivative(u - v);
  return {db + dt, db - dt};
}

FirstForm first_form(const WeierstrassSurface& S, double u, double v) {
  require_domain(S, u, v);
  double E;
  if (both_type2(S)) {
    const double a = u + v, b = u - v;
    E = 4.0 * S.beta.f()->value(a) * S.theta.f()->value(b) *
        (S.beta.g()->value(a) - S.theta.g()->value(b)) *
        (S.beta.h()->value(a) - S.theta.h()->value(b));
  } else {
    E = 2.0 * inner(S.beta.derivative(u + v), S.theta.derivative(u - v));
  }
  return FirstForm{E, 0.0, -E};
}

int sign_E(const WeierstrassSurface& S, double u, double v) {
  return first_form(S, u, v).E < 0.0 ? -1 : 1;
}

bool admissible(const WeierstrassSurface& S, double u, double v, double tol) {
  if (!S.in_domain(u, v)) return false;
  try {
    const double E = first_form(S, u, v).E;
    const Vec4 db = S.beta.derivative(u + v);
    const Vec4 dt = S.theta.derivative(u - v);
    return std::abs(E) > tol * std::max(1.0, norm_euclid(db) * norm_euclid(dt));
  } catch (const DomainError&) {
    return false;
  }
}

FundamentalForms second_fundamental(const WeierstrassSurface& S, double u,
                                    double v) {
  require_domain(S, u, v);
  const double a = u + v, b = u - v;
  const Vec4 db = S.beta.derivative(a);
  const Vec4 dt = S.theta.derivative(b);
  const Vec4 ddb = S.beta.second_derivative(a);
  const Vec4 ddt = S.theta.second_derivative(b);

  double bt;  // <beta',theta'> = E/2
  double A;   // <beta'',theta'>
  double B;   // <beta',theta''>
  if (both_type2(S)) {
    // exact inner-product table for the Type2 normal form
    const double f1 = S.beta.f()->value(a), df1 = S.beta.f()->deriv(a);
    const double g1 = S.beta.g()->value(a), dg1 = S.beta.g()->deriv(a);
    const double h1 = S.beta.h()->value(a), dh1 = S.beta.h()->deriv(a);
    const double f2 = S.theta.f()->value(b), df2 = S.theta.f()->deriv(b);
    const double g2 = S.theta.g()->value(b), dg2 = S.theta.g()->deriv(b);
    const double h2 = S.theta.h()->value(b), dh2 = S.theta.h()->deriv(b);
    const double dg = g1 - g2, dh = h1 - h2;
    bt = 2 * f1 * f2 * dg * dh;
    A = 2 * f2 * df1 * dg * dh + 2 * f1 * f2 * (dg1 * dh + dh1 * dg);
    B = 2 * f1 * df2 * dg * dh - 2 * f1 * f2 * (dg2 * dh + dh2 * dg);
  } else {
    bt = inner(db, dt);
    A = inner(ddb, dt);
    B = inner(db, ddt);
  }

  const double E = 2 * bt;
  const double scale = std::max(1.0, norm_euclid(db) * norm_euclid(dt));
  if (std::abs(E) < 1e-12 * scale) {
    std::ostringstream os;
    os << "E vanishes at (" << u << ", " << v << ")";
    throw SingularPointError(os.str());
  }

  const double P = A / bt;
  const double Q = B / bt;
  const double inv = 1.0 / std::abs(E);
  FundamentalForms out;
  out.E = E;
  out.F = 0.0;
  out.G = -E;
  out.sxx = (ddb + ddt - db * P - dt * Q) * inv;
  out.sxy = (ddb - ddt - db * P + dt * Q) * inv;
  out.syy = out.sxx;
  return out;
}

}  // namespace lorentzw
