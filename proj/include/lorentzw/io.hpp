#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>

#include "lorentzw/canonical.hpp"
#include "lorentzw/pde.hpp"
#include "lorentzw/surface.hpp"

namespace lorentzw {

struct Tolerances {
  double quad_tol = 1e-10;  // position quadrature target
  double mask_tol = 1e-9;   // admissibility threshold on |E|
};

// One fully specified job: surface, evaluation lattice, numeric knobs.
// JSON shape:
//   {"beta": <curve>, "theta": <curve>,
//    "grid": {"u": [min, max, n], "v": [min, max, n]},
//    "tolerances": {"quad_tol": 1e-10, "mask_tol": 1e-9}}
// tolerances is optional; a top-level "residuals" object is tolerated and
// ignored so canonicalize output loads back unchanged. Curve objects:
//   {"kind": "type1", "f": expr, "eps": [e1,e2,e3], "domain": [a,b], "t0": 0}
//   {"kind": "type2", "f": expr, "g": expr, "h": expr, "domain": [a,b], "t0": 0}
//   {"kind": "canonical", "g": expr, "h": expr, "domain": [a,b], "t0": 0}
//   {"kind": "reparam", "base": <type2 curve>, "t0": z0,
//    "map": {"knots_z": [...], "knots_p": [...], "knots_dp": [...], "sign": 1}}
// "canonical" builds the weight 1/(4 sqrt|g'h'|) symbolically; "reparam"
// rebuilds a Hermite reparametrization map over the base generators. t0 is
// optional everywhere (default 0; for reparam, the middle knot). Unknown
// keys anywhere are a ConfigError.
struct SurfaceConfig {
  WeierstrassSurface surface;
  GridSpec grid;
  Tolerances tolerances;
};

SurfaceConfig parse_config(const std::string& text);
SurfaceConfig load_config(const std::string& path);

NullCurve curve_from_json_text(const std::string& text);

// Inverse of the above for expression-backed curves; reparametrized curves
// are emitted by reparam_config_json instead.
std::string curve_to_json_text(const NullCurve& c);

// Full config document for a reparametrized surface: both curves in reparam
// form over the original generators, the given grid, and the measured
// residuals. parse_config reads it back.
std::string reparam_config_json(const WeierstrassSurface& base,
                                const ReparamSolution& sol,
                                const CanonicalReport& report,
                                const GridSpec& grid);

// Lattice of (u, v, Psi, E, sign E) with header u,v,x1,x2,x3,x4,E,sign,mask.
// A node is masked (mask 0, zero values) when it leaves the curve domains,
// fails the admissibility test, or evaluation throws. Returns the number of
// unmasked nodes.
long write_surface_csv(std::ostream& os, const WeierstrassSurface& S,
                       const GridSpec& grid, const Tolerances& tol);

// Same lattice as a JSON document {"grid": ..., "nodes": [...]}.
long write_surface_json(std::ostream& os, const WeierstrassSurface& S,
                        const GridSpec& grid, const Tolerances& tol);

// Wavefront quad mesh of the projection keeping the three listed 1-based
// coordinates. Every node emits a vertex (masked ones sit at the origin);
// faces cover exactly the cells whose four corners are unmasked.
long write_surface_obj(std::ostream& os, const WeierstrassSurface& S,
                       const GridSpec& grid, const Tolerances& tol,
                       const std::array<int, 3>& keep);

// Header u,v,value,mask; masked rows keep value 0.
void write_field_csv(std::ostream& os, const ScalarField& field);

// Header z,p,q: knot abscissa and both reparametrization maps.
void write_knots_csv(std::ostream& os, const ReparamSolution& sol);

// Worker count: hardware concurrency capped by LORENTZW_THREADS, at least 1.
int thread_budget();

// Runs fn(j) for j in [0, n) across thread_budget() workers. fn must touch
// only per-j state; the first exception is rethrown after all rows finish.
void parallel_rows(int n, const std::function<void(int)>& fn);

}  // namespace lorentzw
