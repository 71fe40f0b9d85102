#include "lorentzw/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>

#include "lorentzw/curvature.hpp"
#include "lorentzw/errors.hpp"

namespace lorentzw {

namespace {

constexpr double kOdeLocalTol = 1e-10;

double sq(double x) { return x * x; }

// one RK4 step of the autonomous field
double rk4_step(const std::function<double(double)>& field, double y, double h) {
  const double k1 = field(y);
  const double k2 = field(y + 0.5 * h * k1);
  const double k3 = field(y + 0.5 * h * k2);
  const double k4 = field(y + h * k3);
  return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

// advance y from za to zb (either direction) with step doubling
double advance(const std::function<double(double)>& field, double y, double za,
               double zb, double span) {
  const double dir = zb >= za ? 1.0 : -1.0;
  double z = za;
  double h = zb - za;
  while (dir * (zb - z) > 1e-14 * std::max(1.0, std::abs(zb))) {
    if (std::abs(h) > dir * (zb - z)) h = zb - z;
    if (std::abs(h) < 1e-12 * span)
      throw StiffnessError("reparametrization step collapsed; slope field too stiff");
    const double one = rk4_step(field, y, h);
    double two = rk4_step(field, y, h / 2);
    two = rk4_step(field, two, h / 2);
    const double err = std::abs(two - one) / 15.0;
    if (err <= kOdeLocalTol) {
      z += h;
      y = two;
    }
    const double factor =
        err > 0 ? 0.9 * std::pow(kOdeLocalTol / err, 0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }
  return y;
}

struct MapTrack {
  std::vector<double> y, dy;  // aligned with the shared knot abscissae
  int sign = 1;
};

MapTrack integrate_map(const NullCurve& curve, double y0,
                       const std::vector<double>& knots, int center,
                       double span) {
  const ScalarFunc& f = *curve.f();
  const ScalarFunc& g = *curve.g();
  const ScalarFunc& h = *curve.h();
  MapTrack track;
  track.sign = f.value(y0) >= 0 ? 1 : -1;
  const auto field = [&](double y) {
    return track.sign * canonical_slope(f, g, h, y);
  };
  const int n = static_cast<int>(knots.size());
  track.y.assign(n, 0.0);
  track.y[center] = y0;
  for (int k = center + 1; k < n; ++k) {
    track.y[k] = advance(field, track.y[k - 1], knots[k - 1], knots[k], span);
    if (!curve.contains(track.y[k]))
      throw PreconditionError(
          "reparametrization leaves the curve domain; reduce span");
  }
  for (int k = center - 1; k >= 0; --k) {
    track.y[k] = advance(field, track.y[k + 1], knots[k + 1], knots[k], span);
    if (!curve.contains(track.y[k]))
      throw PreconditionError(
          "reparametrization leaves the curve domain; reduce span");
  }
  track.dy.resize(n);
  for (int k = 0; k < n; ++k) track.dy[k] = field(track.y[k]);
  return track;
}

}  // namespace

WeierstrassSurface make_canonical(const expr::Expr& g1, const expr::Expr& h1,
                                  double t_min1, double t_max1,
                                  const expr::Expr& g2, const expr::Expr& h2,
                                  double t_min2, double t_max2, double t0,
                                  double s0) {
  const auto f1 = std::make_shared<ExprFunc>(symbolic_canonical_weight(g1, h1));
  const auto f2 = std::make_shared<ExprFunc>(symbolic_canonical_weight(g2, h2));
  return {NullCurve::type2(f1, std::make_shared<ExprFunc>(g1),
                           std::make_shared<ExprFunc>(h1), t_min1, t_max1, t0),
          NullCurve::type2(f2, std::make_shared<ExprFunc>(g2),
                           std::make_shared<ExprFunc>(h2), t_min2, t_max2, s0)};
}

CanonicalReport verify_canonical(const WeierstrassSurface& S,
                                 const GridSpec& grid) {
  if (S.beta.kind() != CurveKind::Type2 || S.theta.kind() != CurveKind::Type2)
    throw PreconditionError("canonical verification needs two Type2 curves");
  CanonicalReport rep;
  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      const double u = grid.u(i), v = grid.v(j);
      if (!S.in_domain(u, v) || !admissible(S, u, v)) continue;
      const double a = u + v, b = u - v;
      try {
        const double c1 =
            sq(S.beta.f()->value(a)) * S.beta.g()->deriv(a) * S.beta.h()->deriv(a);
        const double c2 = sq(S.theta.f()->value(b)) * S.theta.g()->deriv(b) *
                          S.theta.h()->deriv(b);
        rep.constancy_residual =
            std::max({rep.constancy_residual, std::abs(std::abs(c1) - 0.0625),
                      std::abs(std::abs(c2) - 0.0625)});
        rep.cross_residual = std::max(rep.cross_residual, std::abs(c1 - c2));
        const double deficit = deficit_closed_form(S, u, v);
        if (deficit > 0) {
          const double E = first_form(S, u, v).E;
          rep.metric_residual = std::max(
              rep.metric_residual, std::abs(E * E * std::sqrt(deficit) - 1.0));
        }
        ++rep.nodes;
      } catch (const SingularPointError&) {
      } catch (const DomainError&) {
      }
    }
  }
  return rep;
}

double canonical_slope(const ScalarFunc& f, const ScalarFunc& g,
                       const ScalarFunc& h, double t) {
  const double fv = f.value(t);
  if (std::abs(fv) < 1e-14)
    throw PreconditionError("weight vanishes along the reparametrization");
  const double pr = g.deriv(t) * h.deriv(t);
  if (std::abs(pr) < 1e-300)
    throw PreconditionError("g'h' vanishes along the reparametrization");
  return 1.0 / (2.0 * std::sqrt(std::abs(fv)) * std::pow(std::abs(pr), 0.25));
}

ReparamMap::ReparamMap(FuncPtr f, FuncPtr g, FuncPtr h, std::vector<double> z,
                       std::vector<double> p, std::vector<double> dp, int sign)
    : f_(std::move(f)),
      g_(std::move(g)),
      h_(std::move(h)),
      z_(std::move(z)),
      p_(std::move(p)),
      dp_(std::move(dp)),
      sign_(sign) {
  if (!f_ || !g_ || !h_) throw PreconditionError("reparametrization needs f, g, h");
  if (z_.size() < 2 || p_.size() != z_.size() || dp_.size() != z_.size())
    throw PreconditionError("reparametrization needs two or more aligned knots");
  for (size_t k = 1; k < z_.size(); ++k)
    if (!(z_[k] > z_[k - 1]))
      throw PreconditionError("reparametrization knots must increase");
  if (sign_ != 1 && sign_ != -1)
    throw PreconditionError("reparametrization branch sign must be +-1");
}

int ReparamMap::interval(double t) const {
  const auto it = std::upper_bound(z_.begin(), z_.end(), t);
  const long raw = (it - z_.begin()) - 1;
  return static_cast<int>(
      std::clamp(raw, 0L, static_cast<long>(z_.size()) - 2));
}

double ReparamMap::value(double t) const {
  const int k = interval(t);
  const double dz = z_[k + 1] - z_[k];
  const double s = (t - z_[k]) / dz;
  const double h00 = (2 * s - 3) * s * s + 1;
  const double h10 = ((s - 2) * s + 1) * s;
  const double h01 = (3 - 2 * s) * s * s;
  const double h11 = (s - 1) * s * s;
  return h00 * p_[k] + h10 * dz * dp_[k] + h01 * p_[k + 1] +
         h11 * dz * dp_[k + 1];
}

double ReparamMap::interpolant_slope(double t) const {
  const int k = interval(t);
  const double dz = z_[k + 1] - z_[k];
  const double s = (t - z_[k]) / dz;
  const double d00 = 6 * s * (s - 1);
  const double d10 = (3 * s - 4) * s + 1;
  const double d01 = 6 * s * (1 - s);
  const double d11 = (3 * s - 2) * s;
  return (d00 * p_[k] + d01 * p_[k + 1]) / dz + d10 * dp_[k] + d11 * dp_[k + 1];
}

double ReparamMap::deriv(double t) const {
  return sign_ * canonical_slope(*f_, *g_, *h_, value(t));
}

double ReparamMap::deriv2(double t) const {
  const double p = value(t);
  const double phi = canonical_slope(*f_, *g_, *h_, p);
  const double fv = f_->value(p);
  const double prod = g_->deriv(p) * h_->deriv(p);
  const double dprod = g_->deriv2(p) * h_->deriv(p) + g_->deriv(p) * h_->deriv2(p);
  const double dlog = -0.5 * f_->deriv(p) / fv - 0.25 * dprod / prod;
  // p'' = phi'(p) p' with p' = sign*phi, and sign^2 = 1
  return phi * phi * dlog;
}

std::string ReparamMap::describe() const {
  std::ostringstream os;
  os << "reparam(" << z_.size() << " knots on [" << z_.front() << ", "
     << z_.back() << "], sign " << sign_ << ")";
  return os.str();
}

ReparamSolution reparametrize_to_canonical(const WeierstrassSurface& S,
                                           double z0, double t0, double s0,
                                           double step, double span) {
  if (S.beta.kind() != CurveKind::Type2 || S.theta.kind() != CurveKind::Type2)
    throw PreconditionError("reparametrization needs two Type2 curves");
  if (!(step > 0) || !(span > 0))
    throw PreconditionError("reparametrization needs positive step and span");
  if (!S.beta.contains(t0) || !S.theta.contains(s0))
    throw PreconditionError("reparametrization base point outside the curves");

  const double half = span / 2;
  const int n_side = std::max(1, static_cast<int>(std::ceil(half / step)));
  const double dz = half / n_side;
  std::vector<double> knots(2 * n_side + 1);
  for (int k = 0; k <= 2 * n_side; ++k) knots[k] = z0 + (k - n_side) * dz;

  const MapTrack tp = integrate_map(S.beta, t0, knots, n_side, span);
  const MapTrack tq = integrate_map(S.theta, s0, knots, n_side, span);

  const auto p_map = std::make_shared<ReparamMap>(
      S.beta.f(), S.beta.g(), S.beta.h(), knots, tp.y, tp.dy, tp.sign);
  const auto q_map = std::make_shared<ReparamMap>(
      S.theta.f(), S.theta.g(), S.theta.h(), knots, tq.y, tq.dy, tq.sign);

  double resid = 0.0;
  for (size_t k = 0; k + 1 < knots.size(); ++k) {
    const double zm = 0.5 * (knots[k] + knots[k + 1]);
    resid = std::max(resid,
                     std::abs(p_map->interpolant_slope(zm) - p_map->deriv(zm)));
    resid = std::max(resid,
                     std::abs(q_map->interpolant_slope(zm) - q_map->deriv(zm)));
  }

  const auto g1 = std::make_shared<ComposedFunc>(S.beta.g(), p_map);
  const auto h1 = std::make_shared<ComposedFunc>(S.beta.h(), p_map);
  const auto g2 = std::make_shared<ComposedFunc>(S.theta.g(), q_map);
  const auto h2 = std::make_shared<ComposedFunc>(S.theta.h(), q_map);
  const auto f1 = std::make_shared<CanonicalWeight>(g1, h1);
  const auto f2 = std::make_shared<CanonicalWeight>(g2, h2);

  const double z_min = knots.front(), z_max = knots.back();
  WeierstrassSurface out{NullCurve::type2(f1, g1, h1, z_min, z_max, z0),
                         NullCurve::type2(f2, g2, h2, z_min, z_max, z0)};
  return ReparamSolution{std::move(knots), tp.y,    tp.dy,
                         tq.y,             tq.dy,   tp.sign,
                         tq.sign,          z_min,   z_max,
                         p_map,            q_map,   resid,
                         std::move(out)};
}

}  // namespace lorentzw
