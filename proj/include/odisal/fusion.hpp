#pragma once

#include <string>
#include <utility>
#include <vector>

#include "odisal/backend.hpp"
#include "odisal/bias.hpp"
#include "odisal/geometry.hpp"
#include "odisal/raster.hpp"

namespace odisal {

/// One planar image extracted from an omni-directional image.
struct PlanarView {
  ViewFrame frame;
  Raster image;
  std::string source_id;
};

/// Equirectangular map assembled from per-view maps, with per-pixel
/// covering-view counts.
struct FusedMap {
  Raster map;
  std::vector<int> coverage;
  bool normalized = false;
  long uncovered_count = 0;
};

enum class SampleMode {
  bilinear,  // sample views at the exact projected coordinate
  nearest,   // snap to the nearest view pixel
};

struct EstimateOptions {
  int view_side = 500;
  int jobs = 1;
  std::string source_id;
  SampleMode sample_mode = SampleMode::bilinear;
};

namespace detail {

/// Planar coordinate of view pixel index i (column or row):
/// (2(i+0.5)/side - 1) * tan(fov/2).
inline double view_pixel_to_planar(double i, int side, double tan_half_fov) {
  return (2.0 * (i + 0.5) / side - 1.0) * tan_half_fov;
}

/// Inverse of view_pixel_to_planar.
inline double view_planar_to_pixel(double p, int side, double tan_half_fov) {
  return (p / tan_half_fov + 1.0) / 2.0 * side - 0.5;
}

}  // namespace detail

/// Gnomonic extraction of a single square view, sampled bilinearly from the
/// equirectangular raster with horizontal wrap.
Raster extract_view(const Raster& odi, const ViewFrame& frame, int view_side);

/// Extracts one view per grid frame. Views of non-2:1 rasters are allowed
/// but will be angularly distorted.
std::vector<PlanarView> extract_views(const Raster& odi, const ViewGrid& grid, int view_side,
                                      const std::string& source_id = "", int jobs = 1);

/// Assigns each equirectangular pixel the mean of the covering per-view map
/// values; uncovered pixels get 0 and are counted. The output is not
/// normalized.
FusedMap integrate_views(const std::vector<std::pair<ViewFrame, Raster>>& maps, int out_width,
                         int out_height, int jobs = 1,
                         SampleMode sample_mode = SampleMode::bilinear);

/// Full estimation pipeline: extract views, predict each without center
/// bias, apply the prior (Method B before integration, Method A after),
/// blur, and normalize to sum 1.
FusedMap estimate(const Raster& odi, const SaliencyBackend& backend, const ViewGrid& grid,
                  const Prior& prior, const BlurSpec& blur, const EstimateOptions& opts = {});

/// The same pipeline stopped before blurring and normalization; blur and
/// normalize commute with nothing upstream, so sweeps reuse this.
FusedMap estimate_unblurred(const Raster& odi, const SaliencyBackend& backend,
                            const ViewGrid& grid, const Prior& prior,
                            const EstimateOptions& opts = {});

}  // namespace odisal
