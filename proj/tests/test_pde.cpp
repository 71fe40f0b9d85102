#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lorentzw/curvature.hpp"
#include "lorentzw/errors.hpp"
#include "lorentzw/pde.hpp"

using namespace lorentzw;

namespace {

GridSpec window1() { return GridSpec{-0.04, 0.04, 81, 0.06, 0.14, 81}; }
GridSpec window1_fine() { return GridSpec{-0.04, 0.04, 161, 0.06, 0.14, 161}; }
GridSpec window2() { return GridSpec{0.26, 0.34, 81, 0.06, 0.14, 81}; }

GeneratorFields cubic_fields(const GridSpec& g) {
  return solution_from_generators(ExprFunc::parse("t+1"), ExprFunc::parse("t"),
                                  ExprFunc::parse("t"), ExprFunc::parse("t+1"),
                                  g);
}

GeneratorFields expo_fields(const GridSpec& g) {
  return solution_from_generators(ExprFunc::parse("t"), ExprFunc::parse("t"),
                                  ExprFunc::parse("exp(t)"),
                                  ExprFunc::parse("-exp(-t)"), g);
}

}  // namespace

TEST_CASE("stencil is exact on cubics and masks the border") {
  const GridSpec g{-1, 1, 11, -1, 1, 11};
  ScalarField f = make_field(g);
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      const double u = g.u(i), v = g.v(j);
      f.set(i, j, u * u * u + 2 * u * u - v * v * v + u * v);
    }
  const ScalarField lap = hyperbolic_laplacian(f);
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      const bool border = i == 0 || i == g.nu - 1 || j == 0 || j == g.nv - 1;
      CHECK(lap.valid(i, j) == !border);
      if (!border)
        CHECK(lap.value(i, j) ==
              doctest::Approx(6 * g.u(i) + 4 + 6 * g.v(j)).epsilon(1e-10));
    }
}

TEST_CASE("stencil turns one masked node into a cross") {
  const GridSpec g{0, 1, 9, 0, 1, 9};
  ScalarField f = make_field(g);
  f.invalidate(4, 5);
  const ScalarField lap = hyperbolic_laplacian(f);
  for (int j = 1; j < 8; ++j)
    for (int i = 1; i < 8; ++i) {
      const bool hit = (i == 4 && j == 5) || (i == 3 && j == 5) ||
                       (i == 5 && j == 5) || (i == 4 && j == 4) ||
                       (i == 4 && j == 6);
      CHECK(lap.valid(i, j) == !hit);
    }
}

TEST_CASE("small grids are rejected") {
  CHECK_THROWS_AS(hyperbolic_laplacian(make_field(GridSpec{0, 1, 2, 0, 1, 5})),
                  PreconditionError);
}

TEST_CASE("generator fields on the first window satisfy the system") {
  const GeneratorFields f = cubic_fields(window1());
  for (int j = 0; j < 81; j += 16)
    for (int i = 0; i < 81; i += 16) {
      const double v = f.K.grid.v(j);
      const double w = 1 - 4 * v * v;
      REQUIRE(f.K.valid(i, j));
      CHECK(f.K.value(i, j) ==
            doctest::Approx(16 * (1 + 4 * v * v) / (w * w * w)).epsilon(1e-12));
      CHECK(f.kappa.value(i, j) ==
            doctest::Approx(-64 * v / (w * w * w)).epsilon(1e-12));
      CHECK(f.sign_e.value(i, j) == -1.0);
    }
  const ResidualReport plus =
      natural_system_residual(f.K, f.kappa, 1, &f.sign_e);
  CHECK(plus.nodes == 73 * 73);
  CHECK(plus.max_r1 < 1e-3);
  CHECK(plus.max_r2 < 1e-3);
  const ResidualReport minus =
      natural_system_residual(f.K, f.kappa, -1, &f.sign_e);
  CHECK(minus.max_r1 == plus.max_r1);
  CHECK(minus.max_r2 == plus.max_r2);

  // without the orientation sign the first equation is off by 16|K|
  const ResidualReport bare = natural_system_residual(f.K, f.kappa, 1, nullptr);
  CHECK(bare.max_r1 > 100.0);
}

TEST_CASE("residuals shrink like h^2") {
  const GeneratorFields coarse = cubic_fields(window1());
  const GeneratorFields fine = cubic_fields(window1_fine());
  const ResidualReport rc =
      natural_system_residual(coarse.K, coarse.kappa, 1, &coarse.sign_e);
  const ResidualReport rf =
      natural_system_residual(fine.K, fine.kappa, 1, &fine.sign_e);
  CHECK(rc.max_r1 / rf.max_r1 > 3.0);
  CHECK(rc.max_r1 / rf.max_r1 < 5.0);
  CHECK(rc.max_r2 / rf.max_r2 > 3.0);
  CHECK(rc.max_r2 / rf.max_r2 < 5.0);
}

TEST_CASE("generator fields on the second window satisfy the system") {
  const GeneratorFields f = expo_fields(window2());
  for (int j = 0; j < 81; j += 20)
    for (int i = 0; i < 81; i += 20) CHECK(f.sign_e.value(i, j) == -1.0);
  const ResidualReport rep =
      natural_system_residual(f.K, f.kappa, 1, &f.sign_e);
  CHECK(rep.nodes == 73 * 73);
  CHECK(rep.max_r1 < 1e-3);
  CHECK(rep.max_r2 < 1e-3);
}

TEST_CASE("constant fields violate the first equation") {
  const GridSpec g{0, 1, 15, 0, 1, 15};
  ScalarField K = make_field(g), kappa = make_field(g);
  for (double& x : K.values) x = 2.0;
  const ResidualReport rep = natural_system_residual(K, kappa, 1, nullptr);
  CHECK(rep.nodes == 7 * 7);
  CHECK(rep.max_r1 == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(rep.max_r2 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("margins starve small grids") {
  for (int n : {7, 9, 10}) {
    const GridSpec g{0, 1, n, 0, 1, n};
    ScalarField K = make_field(g), kappa = make_field(g);
    for (double& x : K.values) x = 2.0;
    CHECK_THROWS_AS(natural_system_residual(K, kappa, 1, nullptr), MaskError);
  }
  const GridSpec g{0, 1, 11, 0, 1, 11};
  ScalarField K = make_field(g), kappa = make_field(g);
  for (double& x : K.values) x = 2.0;
  CHECK(natural_system_residual(K, kappa, 1, nullptr).nodes == 9);
}

TEST_CASE("degenerate generator rows are masked") {
  const GridSpec g{-0.2, 0.2, 21, -0.75, -0.25, 21};
  const GeneratorFields f = cubic_fields(g);
  for (int i = 0; i < 21; ++i) {
    CHECK(!f.K.valid(i, 10));  // 2v + 1 = 0 on this row
    CHECK(f.K.valid(i, 3));
    CHECK(f.K.valid(i, 17));
  }
}

TEST_CASE("sign crossings and domain exits mask or reject") {
  CHECK_THROWS_AS(
      solution_from_generators(ExprFunc::parse("t+1"), ExprFunc::parse("t"),
                               ExprFunc::parse("-t"), ExprFunc::parse("t+1"),
                               GridSpec{-0.2, 0.2, 9, -0.2, 0.2, 9}),
      ConstructionError);
  // ln leaves its domain for u + v <= -1; those nodes are masked
  const GeneratorFields f = solution_from_generators(
      ExprFunc::parse("ln(t+1)+2*t"), ExprFunc::parse("t"),
      ExprFunc::parse("t"), ExprFunc::parse("t+1"),
      GridSpec{-1.3, 0.0, 14, -0.05, 0.05, 5});
  CHECK(!f.K.valid(0, 2));
  CHECK(f.K.valid(12, 2));
}

TEST_CASE("fields tie out with the closed forms") {
  const WeierstrassSurface S{
      NullCurve::type2(ExprFunc::parse("1/4"), ExprFunc::parse("t+1"),
                       ExprFunc::parse("t"), -4.0, 4.0),
      NullCurve::type2(ExprFunc::parse("1/4"), ExprFunc::parse("t"),
                       ExprFunc::parse("t+1"), -4.0, 4.0)};
  const GridSpec g{-0.3, 0.3, 9, -0.3, 0.3, 9};
  const GeneratorFields f = solution_from_generators(S, g);
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      const CurvatureSample c =
          curvatures_canonical_closed_form(S, g.u(i), g.v(j));
      CHECK(f.K.value(i, j) == doctest::Approx(c.K).epsilon(1e-13));
      CHECK(std::abs(f.kappa.value(i, j)) ==
            doctest::Approx(std::abs(c.kappa)).epsilon(1e-13));
      CHECK(static_cast<int>(f.sign_e.value(i, j)) == c.sign_E);
    }
}

TEST_CASE("mismatched inputs are rejected") {
  const GridSpec a{0, 1, 9, 0, 1, 9}, b{0, 1, 9, 0, 2, 9};
  ScalarField K = make_field(a), kappa = make_field(b);
  for (double& x : K.values) x = 2.0;
  CHECK_THROWS_AS(natural_system_residual(K, kappa, 1, nullptr),
                  PreconditionError);
  ScalarField k2 = make_field(a);
  CHECK_THROWS_AS(natural_system_residual(K, k2, 0, nullptr),
                  PreconditionError);
  const WeierstrassSurface plane{
      NullCurve::type1(ExprFunc::parse("1"), 1, 1, 1, -2.0, 2.0),
      NullCurve::type1(ExprFunc::parse("1"), -1, 1, 1, -2.0, 2.0)};
  CHECK_THROWS_AS(solution_from_generators(plane, a), PreconditionError);
  CHECK_THROWS_AS(solution_from_generators(nullptr, ExprFunc::parse("t"),
                                           ExprFunc::parse("t"),
                                           ExprFunc::parse("t"), a),
                  PreconditionError);
}
