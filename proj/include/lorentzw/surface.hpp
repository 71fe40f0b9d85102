#pragma once

#include <utility>

#include "lorentzw/nullcurve.hpp"
#include "lorentzw/vec4.hpp"

namespace lorentzw {

// Uniform parameter lattice. n counts nodes, so step = span/(n-1).
struct GridSpec {
  double u_min = 0.0, u_max = 0.0;
  int nu = 0;
  double v_min = 0.0, v_max = 0.0;
  int nv = 0;

  double hu() const { return nu > 1 ? (u_max - u_min) / (nu - 1) : 0.0; }
  double hv() const { return nv > 1 ? (v_max - v_min) / (nv - 1) : 0.0; }
  double u(int i) const { return u_min + i * hu(); }
  double v(int j) const { return v_min + j * hv(); }
  long nodes() const { return static_cast<long>(nu) * nv; }
};

// Psi(u,v) = beta(u+v) + theta(u-v). The two curve parameters are read at
// a = u+v and b = u-v throughout.
struct WeierstrassSurface {
  NullCurve beta;
  NullCurve theta;

  bool in_domain(double u, double v) const {
    return beta.contains(u + v) && theta.contains(u - v);
  }
};

struct FundamentalForms {
  double E = 0.0, F = 0.0, G = 0.0;
  // second fundamental tensor in the normalized tangent frame; syy = sxx
  // by minimality
  Vec4 sxx, sxy, syy;
};

Vec4 eval_point(const WeierstrassSurface& S, double u, double v,
                double quad_tol = 1e-10);

// (Psi_u, Psi_v) = (beta' + theta', beta' - theta')
std::pair<Vec4, Vec4> tangents(const WeierstrassSurface& S, double u, double v);

// E by the product closed form when both curves are Type2, otherwise by
// 2<beta',theta'>; F = 0 and G = -E identically.
struct FirstForm {
  double E, F, G;
};
FirstForm first_form(const WeierstrassSurface& S, double u, double v);

int sign_E(const WeierstrassSurface& S, double u, double v);

// |E| above this threshold relative to the tangent magnitudes counts as
// nonsingular.
bool admissible(const WeierstrassSurface& S, double u, double v,
                double tol = 1e-9);

// sigma(x,x) and sigma(x,y) from the projection formula with all inner
// products taken from the exact generator expressions (no numerical
// differentiation). Uses |E|: on sign_E=-1 regions the spacelike unit
// tangent is Psi_v/sqrt|E| and the same two vectors span sigma.
FundamentalForms second_fundamental(const WeierstrassSurface& S, double u,
                                    double v);

}  // namespace lorentzw
