#pragma once

#include <utility>

#include "lorentzw/surface.hpp"

namespace lorentzw {

struct CurvatureSample {
  double K = 0.0;
  double kappa = 0.0;
  double deficit = 0.0;  // K^2 - kappa^2
  int sign_E = 1;
  bool general_type = false;
};

// x spacelike unit, y timelike unit; n1 parallel to sigma(x,x) with
// <n1,n1> = epsilon, n2 parallel to sigma(x,y) with <n2,n2> = -epsilon;
// nu, mu > 0 the proportionality factors.
struct CanonicalFrame {
  Vec4 x, y, n1, n2;
  int epsilon = 1;
  double nu = 0.0, mu = 0.0;
};

enum class SurfaceClass { GeneralType, OneDimNormal, Plane, SuperConformalBoundary };

const char* to_string(SurfaceClass c);

// K^2 - kappa^2 as the generator-data quotient
//   g1' g2' h1' h2' / (f1^2 f2^2 (g1-g2)^4 (h1-h2)^4).
// Both curves must be Type2.
double deficit_closed_form(const WeierstrassSurface& S, double u, double v);

// K^2 - kappa^2 as the frame-free combination
//   (<sxx,sxx> + <sxy,sxy>)^2 - 4<sxx,sxy>^2,
// valid for any curve kinds.
double deficit_frame_free(const WeierstrassSurface& S, double u, double v);

// Closed-form K and kappa for canonically parametrized generators; kappa
// carries the -|.| sign convention. Checks pointwise that the data is
// canonical (|f_i^2 g_i' h_i'| = 1/16, equal across the curves) and that
// g1'g2'h1'h2' > 0.
CurvatureSample curvatures_canonical_closed_form(const WeierstrassSurface& S,
                                                 double u, double v);

// Independent normal-frame computation: normalizes sigma(x,x), sigma(x,y)
// in the indefinite metric and reads K, kappa off the sigma components.
// kappa here is signed by the frame orientation; compare magnitudes across
// methods.
std::pair<CurvatureSample, CanonicalFrame> curvatures_via_frame(
    const WeierstrassSurface& S, double u, double v);

// Pointwise trichotomy. Deficit takes priority over the rank of the pair
// (sigma(x,x), sigma(x,y)): on kappa = 0 sets sigma(x,y) vanishes and the
// two vectors alone look rank-1 even where the deficit certifies general
// type.
SurfaceClass classify(const WeierstrassSurface& S, double u, double v);

}  // namespace lorentzw
