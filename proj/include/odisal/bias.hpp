#pragma once

#include <variant>
#include <vector>

#include "odisal/raster.hpp"

namespace odisal {

/// Equirectangular multiplicative prior p(x|fix), applied after view
/// integration (Method A).
struct EquatorBias {
  Raster map;
};

/// Planar multiplicative prior for one vertical viewing direction, shared by
/// every view at that latitude.
struct LatitudeBiasEntry {
  double phi_c = 0.0;  // radians
  Raster bias;
};

/// Per-latitude priors applied to each view map before integration
/// (Method B). One entry per distinct grid latitude, sorted ascending.
struct LatitudeBiasSet {
  std::vector<LatitudeBiasEntry> entries;

  const LatitudeBiasEntry* find(double phi_c, double tol = 1e-9) const;
};

/// Prior mode for saliency estimation: none, Method A, or Method B.
using Prior = std::variant<std::monostate, EquatorBias, LatitudeBiasSet>;

}  // namespace odisal
