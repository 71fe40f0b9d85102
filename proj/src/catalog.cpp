#include "lorentzw/catalog.hpp"

#include <cmath>

namespace lorentzw {

namespace {

double expo_W(double u, double v) {
  const double t = u + v;
  return t * t - 1 - 2 * t * std::sinh(u - v);
}

Vec4 cubic_arm(double t) {
  return Vec4{(2 * t * t * t + 3 * t * t + 6 * t) / 24, 6 * t / 24.0,
              (-2 * t * t * t - 3 * t * t + 6 * t) / 24,
              (6 * t * t + 6 * t) / 24};
}

Vec4 mirror2(const Vec4& p) { return Vec4{p.x1, -p.x2, p.x3, p.x4}; }

CatalogEntry make_cubic() {
  return CatalogEntry{
      .name = "cubic",
      .blurb = "polynomial generators; singular on the lines v = +-1/2",
      .surface =
          WeierstrassSurface{
              NullCurve::type2(ExprFunc::parse("1/4"), ExprFunc::parse("t+1"),
                               ExprFunc::parse("t"), -4.0, 4.0),
              NullCurve::type2(ExprFunc::parse("1/4"), ExprFunc::parse("t"),
                               ExprFunc::parse("t+1"), -4.0, 4.0)},
      .default_grid = GridSpec{-1, 1, 21, -1, 1, 21},
      .pde_window = GridSpec{-0.04, 0.04, 81, 0.06, 0.14, 81},
      .has_pde_window = true,
      .K_golden =
          [](double, double v) {
            const double w = 1 - 4 * v * v;
            return 16 * (1 + 4 * v * v) / (w * w * w);
          },
      .kappa_golden =
          [](double, double v) {
            const double w = 1 - 4 * v * v;
            return -std::abs(64 * v / (w * w * w));
          },
      .psi_golden =
          [](double u, double v) {
            return cubic_arm(u + v) + mirror2(cubic_arm(u - v));
          },
      .excluded =
          [](double, double v) {
            return std::abs(v - 0.5) < 0.05 || std::abs(v + 0.5) < 0.05;
          }};
}

CatalogEntry make_expo() {
  return CatalogEntry{
      .name = "expo",
      .blurb = "polynomial against exponential generators; singular where "
               "(u+v)^2 - 1 = 2(u+v) sinh(u-v)",
      .surface =
          WeierstrassSurface{
              NullCurve::type2(ExprFunc::parse("1/4"), ExprFunc::parse("t"),
                               ExprFunc::parse("t"), -3.0, 3.0),
              NullCurve::type2(ExprFunc::parse("1/4"), ExprFunc::parse("exp(t)"),
                               ExprFunc::parse("-exp(-t)"), -3.0, 3.0)},
      .default_grid = GridSpec{-0.8, 0.8, 21, -0.8, 0.8, 21},
      .pde_window = GridSpec{0.26, 0.34, 81, 0.06, 0.14, 81},
      .has_pde_window = true,
      .K_golden =
          [](double u, double v) {
            const double W = expo_W(u, v), t = u + v;
            return -16 * std::cosh(u - v) * (t * t + 1) / (W * W * W);
          },
      .kappa_golden =
          [](double u, double v) {
            const double a = std::abs(expo_W(u, v)), t = u + v;
            return -16 * std::abs((t * t - 1) * std::sinh(u - v) + 2 * t) /
                   (a * a * a);
          },
      .psi_golden =
          [](double u, double v) {
            const double t = u + v, s = u - v;
            return Vec4{(t + t * t * t / 3) / 4, std::sinh(s) / 2,
                        (t - t * t * t / 3) / 4 + s / 2,
                        t * t / 4 + (std::cosh(s) - 1) / 2};
          },
      .excluded =
          [](double u, double v) { return std::abs(expo_W(u, v)) < 0.05; }};
}

CatalogEntry make_plane() {
  return CatalogEntry{
      .name = "plane",
      .blurb = "two straight null lines; totally geodesic, sigma = 0",
      .surface =
          WeierstrassSurface{
              NullCurve::type1(ExprFunc::parse("1"), 1, 1, 1, -2.0, 2.0),
              NullCurve::type1(ExprFunc::parse("1"), -1, 1, 1, -2.0, 2.0)},
      .default_grid = GridSpec{-0.5, 0.5, 11, -0.5, 0.5, 11},
      .psi_golden =
          [](double u, double v) {
            return Vec4{2 * u, 2 * v, 2 * u, 2 * u};
          },
      .excluded = [](double, double) { return false; }};
}

CatalogEntry make_rank1() {
  return CatalogEntry{
      .name = "rank1",
      .blurb = "straight line against a cubic; one-dimensional first normal "
               "space everywhere",
      .surface =
          WeierstrassSurface{
              NullCurve::type1(ExprFunc::parse("1"), -1, 1, -1, -1.0, 1.0),
              NullCurve::type2(ExprFunc::parse("1/4"), ExprFunc::parse("t"),
                               ExprFunc::parse("t+1"), -0.5, 0.5)},
      .default_grid = GridSpec{-0.2, 0.2, 11, -0.2, 0.2, 11},
      .psi_golden =
          [](double u, double v) {
            const double t = u + v;
            return Vec4{t, -t, t, -t} + mirror2(cubic_arm(u - v));
          },
      .excluded = [](double, double) { return false; }};
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      make_cubic(), make_expo(), make_plane(), make_rank1()};
  return entries;
}

const CatalogEntry* catalog_find(std::string_view name) {
  for (const CatalogEntry& e : catalog_entries())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace lorentzw
