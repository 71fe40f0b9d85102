#pragma once

#include <cstdint>
#include <vector>

#include "lorentzw/func.hpp"
#include "lorentzw/surface.hpp"

namespace lorentzw {

// Grid sample of a scalar quantity; mask value 1 marks a usable node.
// Storage is row-major in u, so index = j*nu + i for node (u_i, v_j).
struct ScalarField {
  GridSpec grid;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  long index(int i, int j) const { return static_cast<long>(j) * grid.nu + i; }
  double value(int i, int j) const { return values[index(i, j)]; }
  bool valid(int i, int j) const { return mask[index(i, j)] != 0; }
  void set(int i, int j, double x) { values[index(i, j)] = x; }
  void invalidate(int i, int j) { mask[index(i, j)] = 0; }
};

// All-valid zero field over the grid.
ScalarField make_field(const GridSpec& grid);

// Second-order stencil of d^2/du^2 - d^2/dv^2. Grid boundary nodes and
// nodes whose five-point stencil touches a masked node come out masked.
ScalarField hyperbolic_laplacian(const ScalarField& F);

struct ResidualReport {
  ScalarField r1, r2;
  double max_r1 = 0.0, max_r2 = 0.0;
  long nodes = 0;  // nodes surviving the margin and entering the norms
};

// Residuals of the natural system for D := K^2 - kappa^2 > 0:
//   r1 = s D^(1/4) lap(ln D) - 8 K
//   r2 = s D^(1/4) lap(ln((K + eps kappa)/(K - eps kappa))) - 4 eps kappa
// where s is the per-node metric orientation sign(E) when a sign field is
// given and 1 otherwise. Flipping eps negates r2 pointwise, so the norms
// do not depend on it. Nodes with D <= 0 are masked. Max norms skip every
// node within Chebyshev distance 3 of a masked node or the boundary;
// fewer than 9 surviving nodes raise MaskError.
ResidualReport natural_system_residual(const ScalarField& K,
                                       const ScalarField& kappa, int epsilon,
                                       const ScalarField* sign_e = nullptr);

struct GeneratorFields {
  ScalarField K, kappa, sign_e;
};

// Curvature fields straight from canonical generator data, so that the
// residual above can certify a surface without any finite differencing of
// the surface itself. kappa here is the signed smooth variant (no -|.|),
// which keeps the log ratio differentiable across kappa = 0; its modulus
// matches the closed form. Nodes where a generator difference or the
// derivative product degenerates, or where evaluation leaves a domain,
// are masked; a fully masked grid raises ConstructionError.
GeneratorFields solution_from_generators(FuncPtr g1, FuncPtr h1, FuncPtr g2,
                                         FuncPtr h2, const GridSpec& grid);

// Same fields read off a surface with two Type2 curves; the weights are
// ignored, which is exact precisely when they are the canonical ones.
GeneratorFields solution_from_generators(const WeierstrassSurface& S,
                                         const GridSpec& grid);

}  // namespace lorentzw
