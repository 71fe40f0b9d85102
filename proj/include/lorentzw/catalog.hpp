#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "lorentzw/surface.hpp"

namespace lorentzw {

// Built-in demonstration surface. Goldens are independent closed forms
// for cross-checking the construction and curvature pipelines; entries
// without a meaningful quantity leave the corresponding closure empty.
struct CatalogEntry {
  std::string name;
  std::string blurb;
  WeierstrassSurface surface;
  GridSpec default_grid;
  GridSpec pde_window;
  bool has_pde_window = false;
  std::function<double(double, double)> K_golden;      // curvature K(u,v)
  std::function<double(double, double)> kappa_golden;  // normal curvature
  std::function<Vec4(double, double)> psi_golden;      // immersion Psi(u,v)
  std::function<bool(double, double)> excluded;        // singular margin
};

const std::vector<CatalogEntry>& catalog_entries();

// Null when no entry has that name.
const CatalogEntry* catalog_find(std::string_view name);

}  // namespace lorentzw
