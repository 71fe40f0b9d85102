#include "lorentzw/pde.hpp"

#include <algorithm>
#include <cmath>

#include "lorentzw/errors.hpp"

namespace lorentzw {

namespace {

constexpr int kMargin = 3;  // Chebyshev dilation excluded from max norms

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  const GridSpec &ga = a.grid, &gb = b.grid;
  if (ga.nu != gb.nu || ga.nv != gb.nv || ga.u_min != gb.u_min ||
      ga.u_max != gb.u_max || ga.v_min != gb.v_min || ga.v_max != gb.v_max)
    throw PreconditionError("fields live on different grids");
}

// max |r| over nodes whose 7x7 neighborhood is valid and inside the grid
double margin_max(const ScalarField& r, long* survivors) {
  const int nu = r.grid.nu, nv = r.grid.nv;
  double best = 0.0;
  long n = 0;
  for (int j = kMargin; j < nv - kMargin; ++j) {
    for (int i = kMargin; i < nu - kMargin; ++i) {
      bool core = true;
      for (int dj = -kMargin; core && dj <= kMargin; ++dj)
        for (int di = -kMargin; core && di <= kMargin; ++di)
          if (!r.valid(i + di, j + dj)) core = false;
      if (!core) continue;
      best = std::max(best, std::abs(r.value(i, j)));
      ++n;
    }
  }
  *survivors = n;
  return best;
}

}  // namespace

ScalarField make_field(const GridSpec& grid) {
  ScalarField f;
  f.grid = grid;
  f.values.assign(grid.nodes(), 0.0);
  f.mask.assign(grid.nodes(), 1);
  return f;
}

ScalarField hyperbolic_laplacian(const ScalarField& F) {
  const int nu = F.grid.nu, nv = F.grid.nv;
  if (nu < 3 || nv < 3)
    throw PreconditionError("stencil needs at least a 3x3 grid");
  const double iu = 1.0 / (F.grid.hu() * F.grid.hu());
  const double iv = 1.0 / (F.grid.hv() * F.grid.hv());
  ScalarField out = make_field(F.grid);
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      if (i == 0 || i == nu - 1 || j == 0 || j == nv - 1 || !F.valid(i, j) ||
          !F.valid(i - 1, j) || !F.valid(i + 1, j) || !F.valid(i, j - 1) ||
          !F.valid(i, j + 1)) {
        out.invalidate(i, j);
        continue;
      }
      const double du2 =
          (F.value(i + 1, j) - 2 * F.value(i, j) + F.value(i - 1, j)) * iu;
      const double dv2 =
          (F.value(i, j + 1) - 2 * F.value(i, j) + F.value(i, j - 1)) * iv;
      out.set(i, j, du2 - dv2);
    }
  }
  return out;
}

ResidualReport natural_system_residual(const ScalarField& K,
                                       const ScalarField& kappa, int epsilon,
                                       const ScalarField* sign_e) {
  require_same_grid(K, kappa);
  if (sign_e) require_same_grid(K, *sign_e);
  if (epsilon != 1 && epsilon != -1)
    throw PreconditionError("epsilon must be +-1");

  const GridSpec& grid = K.grid;
  ScalarField lnD = make_field(grid), lnR = make_field(grid);
  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      if (!K.valid(i, j) || !kappa.valid(i, j) ||
          (sign_e && !sign_e->valid(i, j))) {
        lnD.invalidate(i, j);
        lnR.invalidate(i, j);
        continue;
      }
      const double k = K.value(i, j), c = kappa.value(i, j);
      const double D = k * k - c * c;
      const double ratio = (k + epsilon * c) / (k - epsilon * c);
      if (!(D > 0) || !(ratio > 0) || !std::isfinite(ratio)) {
        lnD.invalidate(i, j);
        lnR.invalidate(i, j);
        continue;
      }
      lnD.set(i, j, std::log(D));
      lnR.set(i, j, std::log(ratio));
    }
  }

  const ScalarField lap1 = hyperbolic_laplacian(lnD);
  const ScalarField lap2 = hyperbolic_laplacian(lnR);

  ResidualReport rep{make_field(grid), make_field(grid), 0.0, 0.0, 0};
  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      if (!lap1.valid(i, j)) {
        rep.r1.invalidate(i, j);
        rep.r2.invalidate(i, j);
        continue;
      }
      const double k = K.value(i, j), c = kappa.value(i, j);
      const double s =
          sign_e ? (sign_e->value(i, j) < 0 ? -1.0 : 1.0) : 1.0;
      const double d4 = std::pow(k * k - c * c, 0.25);
      rep.r1.set(i, j, s * d4 * lap1.value(i, j) - 8 * k);
      rep.r2.set(i, j, s * d4 * lap2.value(i, j) - 4 * epsilon * c);
    }
  }

  long n1 = 0, n2 = 0;
  rep.max_r1 = margin_max(rep.r1, &n1);
  rep.max_r2 = margin_max(rep.r2, &n2);
  rep.nodes = std::min(n1, n2);
  if (rep.nodes < 9)
    throw MaskError("fewer than 9 nodes survive the residual margin");
  return rep;
}

GeneratorFields solution_from_generators(FuncPtr g1, FuncPtr h1, FuncPtr g2,
                                         FuncPtr h2, const GridSpec& grid) {
  if (!g1 || !h1 || !g2 || !h2)
    throw PreconditionError("generator fields need all four functions");
  GeneratorFields out{make_field(grid), make_field(grid), make_field(grid)};
  long alive = 0;
  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      const double a = grid.u(i) + grid.v(j), b = grid.u(i) - grid.v(j);
      bool ok = true;
      try {
        const double G1 = g1->value(a), H1 = h1->value(a);
        const double G2 = g2->value(b), H2 = h2->value(b);
        const double dG1 = g1->deriv(a), dH1 = h1->deriv(a);
        const double dG2 = g2->deriv(b), dH2 = h2->deriv(b);
        const double dg = G1 - G2, dh = H1 - H2;
        const double P = dG1 * dG2 * dH1 * dH2;
        const double gscale = std::max({1.0, std::abs(G1), std::abs(G2)});
        const double hscale = std::max({1.0, std::abs(H1), std::abs(H2)});
        if (std::abs(dg) < 1e-12 * gscale || std::abs(dh) < 1e-12 * hscale ||
            !(P > 0)) {
          ok = false;
        } else {
          const double root = std::sqrt(P);
          const double den = dg * dg * dg * dh * dh * dh;
          const double sum = dh * dh * dG1 * dG2 + dg * dg * dH1 * dH2;
          const double dif = dh * dh * dG1 * dG2 - dg * dg * dH1 * dH2;
          const double K = -8 * root * sum / den;
          const double kap = -8 * root * dif / den;
          if (!std::isfinite(K) || !std::isfinite(kap)) {
            ok = false;
          } else {
            out.K.set(i, j, K);
            out.kappa.set(i, j, kap);
            out.sign_e.set(i, j, dg * dh < 0 ? -1.0 : 1.0);
          }
        }
      } catch (const DomainError&) {
        ok = false;
      }
      if (ok) {
        ++alive;
      } else {
        out.K.invalidate(i, j);
        out.kappa.invalidate(i, j);
        out.sign_e.invalidate(i, j);
      }
    }
  }
  if (alive == 0)
    throw ConstructionError("every grid node is masked; no fields to build");
  return out;
}

GeneratorFields solution_from_generators(const WeierstrassSurface& S,
                                         const GridSpec& grid) {
  if (S.beta.kind() != CurveKind::Type2 || S.theta.kind() != CurveKind::Type2)
    throw PreconditionError("generator fields need two Type2 curves");
  return solution_from_generators(S.beta.g(), S.beta.h(), S.theta.g(),
                                  S.theta.h(), grid);
}

}  // namespace lorentzw
