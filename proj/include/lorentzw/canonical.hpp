#pragma once

#include <vector>

#include "lorentzw/func.hpp"
#include "lorentzw/surface.hpp"

namespace lorentzw {

// Residuals of the canonical-parameter conditions over a grid. A surface
// is canonically parametrized when f_i^2 g_i' h_i' is the same constant of
// modulus 1/16 along both curves; the metric residual checks the
// equivalent identity E^2 sqrt(K^2 - kappa^2) = 1 through an independent
// code path.
struct CanonicalReport {
  double constancy_residual = 0.0;  // max | |f_i^2 g_i' h_i'| - 1/16 |
  double cross_residual = 0.0;      // max | c_1(u+v) - c_2(u-v) |
  double metric_residual = 0.0;     // max | E^2 sqrt(deficit) - 1 |
  long nodes = 0;                   // admissible nodes that were sampled
};

// Surface from generator pairs alone; the weights 1/(4 sqrt|g_i' h_i'|)
// are built symbolically, so the data is canonical by construction and
// carries exact derivatives.
WeierstrassSurface make_canonical(const expr::Expr& g1, const expr::Expr& h1,
                                  double t_min1, double t_max1,
                                  const expr::Expr& g2, const expr::Expr& h2,
                                  double t_min2, double t_max2, double t0 = 0.0,
                                  double s0 = 0.0);

// Samples every admissible grid node. Both curves must be Type2.
CanonicalReport verify_canonical(const WeierstrassSurface& S,
                                 const GridSpec& grid);

// Slope field of the reparametrization ODE
//   p' = s / (2 sqrt|f(p)| |g'(p) h'(p)|^(1/4)).
// Composing a Type2 curve with any solution p makes the new weight
// p' f(p) satisfy f^2 g' h' = +-1/16 pointwise. Slope 1 means the curve
// is already canonical.
double canonical_slope(const ScalarFunc& f, const ScalarFunc& g,
                       const ScalarFunc& h, double t);

// Monotone ODE solution stored as cubic Hermite knots. value() is the
// interpolant; deriv() re-reads the slope field at the interpolated point,
// so curves composed with the map are canonical exactly rather than up to
// knot error. The knot data plus the branch sign fully determine the map,
// which keeps it serializable.
class ReparamMap final : public ScalarFunc {
 public:
  ReparamMap(FuncPtr f, FuncPtr g, FuncPtr h, std::vector<double> z,
             std::vector<double> p, std::vector<double> dp, int sign);

  double value(double t) const override;
  double deriv(double t) const override;
  double deriv2(double t) const override;
  std::string describe() const override;

  // Hermite slope, as opposed to the ODE field that deriv() returns; the
  // gap between the two at interval midpoints is the ode_residual.
  double interpolant_slope(double t) const;

  const std::vector<double>& knots_z() const { return z_; }
  const std::vector<double>& knots_p() const { return p_; }
  const std::vector<double>& knots_dp() const { return dp_; }
  int sign() const { return sign_; }

 private:
  int interval(double t) const;

  FuncPtr f_, g_, h_;
  std::vector<double> z_, p_, dp_;
  int sign_ = 1;
};

struct ReparamSolution {
  std::vector<double> z;      // knot abscissae, ascending
  std::vector<double> p, dp;  // first-curve map values and ODE slopes
  std::vector<double> q, dq;  // second-curve map
  int s_p = 1, s_q = 1;       // ODE branch signs, sign(f_i)
  double z_min = 0.0, z_max = 0.0;
  FuncPtr p_func, q_func;     // ReparamMap instances over the knots
  double ode_residual = 0.0;  // max midpoint gap, Hermite slope vs field
  WeierstrassSurface surface; // canonical curves over (z_min, z_max)
};

// Integrates both slope ODEs from z0, where p = t0 and q = s0, across
// [z0 - span/2, z0 + span/2] with knots every `step`. RK4 with step
// doubling inside each knot interval; local tolerance 1e-10 per step.
// The new surface traces the same point set translated so that the new
// base point (z0, 0) sits at the origin.
ReparamSolution reparametrize_to_canonical(const WeierstrassSurface& S,
                                           double z0, double t0, double s0,
                                           double step = 1.0 / 64,
                                           double span = 2.0);

}  // namespace lorentzw
