#include "lorentzw/curvature.hpp"

#include <cmath>
#include <sstream>

#include "lorentzw/errors.hpp"

namespace lorentzw {

namespace {

constexpr double kClassifyTol = 1e-9;
constexpr double kCanonicalTol = 1e-8;

struct GeneratorSample {
  double f1, g1, h1, dg1, dh1;
  double f2, g2, h2, dg2, dh2;
  double dg, dh;  // g1-g2, h1-h2
};

GeneratorSample sample_generators(const WeierstrassSurface& S, double u, double v) {
  if (S.beta.kind() != CurveKind::Type2 || S.theta.kind() != CurveKind::Type2)
    throw PreconditionError("generator closed forms need two Type2 curves");
  const double a = u + v, b = u - v;
  GeneratorSample s;
  s.f1 = S.beta.f()->value(a);
  s.g1 = S.beta.g()->value(a);
  s.h1 = S.beta.h()->value(a);
  s.dg1 = S.beta.g()->deriv(a);
  s.dh1 = S.beta.h()->deriv(a);
  s.f2 = S.theta.f()->value(b);
  s.g2 = S.theta.g()->value(b);
  s.h2 = S.theta.h()->value(b);
  s.dg2 = S.theta.g()->deriv(b);
  s.dh2 = S.theta.h()->deriv(b);
  s.dg = s.g1 - s.g2;
  s.dh = s.h1 - s.h2;
  return s;
}

void require_nonsingular(const GeneratorSample& s, double u, double v) {
  const double gscale = std::max(1.0, std::max(std::abs(s.g1), std::abs(s.g2)));
  const double hscale = std::max(1.0, std::max(std::abs(s.h1), std::abs(s.h2)));
  if (std::abs(s.dg) < 1e-12 * gscale || std::abs(s.dh) < 1e-12 * hscale ||
      std::abs(s.f1) < 1e-12 || std::abs(s.f2) < 1e-12) {
    std::ostringstream os;
    os << "generator difference vanishes at (" << u << ", " << v << ")";
    throw SingularPointError(os.str());
  }
}

}  // namespace

const char* to_string(SurfaceClass c) {
  switch (c) {
    case SurfaceClass::GeneralType: return "GeneralType";
    case SurfaceClass::OneDimNormal: return "OneDimNormal";
    case SurfaceClass::Plane: return "Plane";
    default: return "SuperConformalBoundary";
  }
}

double deficit_closed_form(const WeierstrassSurface& S, double u, double v) {
  const GeneratorSample s = sample_generators(S, u, v);
  require_nonsingular(s, u, v);
  const double num = s.dg1 * s.dg2 * s.dh1 * s.dh2;
  const double dg2 = s.dg * s.dg, dh2 = s.dh * s.dh;
  const double den = s.f1 * s.f1 * s.f2 * s.f2 * dg2 * dg2 * dh2 * dh2;
  return num / den;
}

double deficit_frame_free(const WeierstrassSurface& S, double u, double v) {
  const FundamentalForms ff = second_fundamental(S, u, v);
  const double s1 = inner(ff.sxx, ff.sxx);
  const double s2 = inner(ff.sxy, ff.sxy);
  const double cr = inner(ff.sxx, ff.sxy);
  return (s1 + s2) * (s1 + s2) - 4 * cr * cr;
}

CurvatureSample curvatures_canonical_closed_form(const WeierstrassSurface& S,
                                                 double u, double v) {
  const GeneratorSample s = sample_generators(S, u, v);
  require_nonsingular(s, u, v);

  const double P = s.dg1 * s.dg2 * s.dh1 * s.dh2;
  if (P <= 0.0) {
    std::ostringstream os;
    os << "g1'g2'h1'h2' = " << P << " at (" << u << ", " << v
       << "); the closed forms need a positive product";
    throw NegativeProductError(os.str());
  }
  const double c1 = s.f1 * s.f1 * s.dg1 * s.dh1;
  const double c2 = s.f2 * s.f2 * s.dg2 * s.dh2;
  if (std::abs(std::abs(c1) - 0.0625) > kCanonicalTol ||
      std::abs(std::abs(c2) - 0.0625) > kCanonicalTol ||
      std::abs(c1 - c2) > kCanonicalTol) {
    std::ostringstream os;
    os << "parameters not canonical at (" << u << ", " << v << "): f1^2 g1'h1' = "
       << c1 << ", f2^2 g2'h2' = " << c2;
    throw NotCanonicalError(os.str());
  }

  const double root = std::sqrt(P);
  const double den = s.dg * s.dg * s.dg * s.dh * s.dh * s.dh;
  const double sum = s.dh * s.dh * s.dg1 * s.dg2 + s.dg * s.dg * s.dh1 * s.dh2;
  const double dif = s.dh * s.dh * s.dg1 * s.dg2 - s.dg * s.dg * s.dh1 * s.dh2;

  CurvatureSample out;
  out.K = -8 * root * sum / den;
  out.kappa = -std::abs(8 * root * dif / den);
  out.deficit = out.K * out.K - out.kappa * out.kappa;
  out.sign_E = (s.f1 * s.f2 * s.dg * s.dh) < 0 ? -1 : 1;
  out.general_type =
      out.deficit > kClassifyTol * std::pow(std::abs(out.K) + std::abs(out.kappa), 2);
  return out;
}

std::pair<CurvatureSample, CanonicalFrame> curvatures_via_frame(
    const WeierstrassSurface& S, double u, double v) {
  const FundamentalForms ff = second_fundamental(S, u, v);
  if (normal_rank(ff.sxx, ff.sxy) < 2)
    throw RankError("first normal space has rank < 2; no canonical frame");

  const double s1 = inner(ff.sxx, ff.sxx);
  const double s2 = inner(ff.sxy, ff.sxy);
  if (std::abs(s1) <= 1e-10 * std::max(1.0, norm2_euclid(ff.sxx)) ||
      std::abs(s2) <= 1e-10 * std::max(1.0, norm2_euclid(ff.sxy)))
    throw DegenerateNormalError("lightlike normal vector cannot be normalized");
  if ((s1 > 0) == (s2 > 0))
    throw DegenerateNormalError("sigma(x,x) and sigma(x,y) share a causal type");

  CanonicalFrame fr;
  fr.epsilon = s1 > 0 ? 1 : -1;
  fr.nu = std::sqrt(std::abs(s1));
  fr.mu = std::sqrt(std::abs(s2));
  fr.n1 = ff.sxx / fr.nu;
  fr.n2 = ff.sxy / fr.mu;

  const auto [pu, pv] = tangents(S, u, v);
  const double r = 1.0 / std::sqrt(std::abs(ff.E));
  if (ff.E > 0) {
    fr.x = pu * r;
    fr.y = pv * r;
  } else {
    fr.x = pv * r;
    fr.y = pu * r;
  }

  // components of sigma in the spacelike-first frame (e1, e2)
  const Vec4& e1 = fr.epsilon > 0 ? fr.n1 : fr.n2;
  const Vec4& e2 = fr.epsilon > 0 ? fr.n2 : fr.n1;
  const double a = inner(ff.sxx, e1), b = -inner(ff.sxx, e2);
  const double c = inner(ff.sxy, e1), d = -inner(ff.sxy, e2);

  CurvatureSample out;
  out.K = b * b - a * a + c * c - d * d;
  out.kappa = 2 * (b * c - a * d);
  out.deficit = out.K * out.K - out.kappa * out.kappa;
  out.sign_E = ff.E < 0 ? -1 : 1;
  out.general_type =
      out.deficit > kClassifyTol * std::pow(std::abs(out.K) + std::abs(out.kappa), 2);
  return {out, fr};
}

SurfaceClass classify(const WeierstrassSurface& S, double u, double v) {
  const FundamentalForms ff = second_fundamental(S, u, v);
  if (std::max(max_abs(ff.sxx), max_abs(ff.sxy)) < 1e-10)
    return SurfaceClass::Plane;

  const double s1 = inner(ff.sxx, ff.sxx);
  const double s2 = inner(ff.sxy, ff.sxy);
  const double cr = inner(ff.sxx, ff.sxy);
  const double deficit = (s1 + s2) * (s1 + s2) - 4 * cr * cr;
  const double scale = std::pow(std::abs(s1) + std::abs(s2) + 2 * std::abs(cr), 2);
  if (deficit > kClassifyTol * std::max(1e-300, scale))
    return SurfaceClass::GeneralType;
  if (normal_rank(ff.sxx, ff.sxy) <= 1) return SurfaceClass::OneDimNormal;
  return SurfaceClass::SuperConformalBoundary;
}

}  // namespace lorentzw
