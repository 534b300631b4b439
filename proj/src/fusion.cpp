#include "odisal/fusion.hpp"

#include <cmath>

#include "odisal/parallel.hpp"

namespace odisal {

const LatitudeBiasEntry* LatitudeBiasSet::find(double phi_c, double tol) const {
  for (const LatitudeBiasEntry& e : entries) {
    if (std::abs(e.phi_c - phi_c) <= tol) return &e;
  }
  return nullptr;
}

Raster extract_view(const Raster& odi, const ViewFrame& frame, int view_side) {
  if (view_side < 1) throw InvalidArgumentError("view side must be >= 1");
  Raster view(view_side, view_side, 0.0);
  double tan_half = std::tan(frame.fov / 2);
  for (int j = 0; j < view_side; ++j) {
    double v = detail::view_pixel_to_planar(j, view_side, tan_half);
    for (int i = 0; i < view_side; ++i) {
      double u = detail::view_pixel_to_planar(i, view_side, tan_half);
      Direction3 dir{frame.z_axis.x + u * frame.x_axis.x + v * frame.y_axis.x,
                     frame.z_axis.y + u * frame.x_axis.y + v * frame.y_axis.y,
                     frame.z_axis.z + u * frame.x_axis.z + v * frame.y_axis.z};
      SphericalCoord sc = direction_to_spherical(dir.normalized());
      PixelPos pos = equirect_spherical_to_pixel(sc, odi.width(), odi.height());
      view.at(j, i) = sample_bilinear(odi, pos.col, pos.row, /*wrap_horizontal=*/true);
    }
  }
  return view;
}

std::vector<PlanarView> extract_views(const Raster& odi, const ViewGrid& grid, int view_side,
                                      const std::string& source_id, int jobs) {
  if (view_side < 32) {
    throw InvalidArgumentError("planar views must be at least 32 pixels per side");
  }
  std::vector<PlanarView> views(grid.frames.size());
  parallel_for(static_cast<int>(grid.frames.size()), jobs, [&](int i) {
    views[i].frame = grid.frames[i];
    views[i].image = extract_view(odi, grid.frames[i], view_side);
    views[i].source_id = source_id;
  });
  return views;
}

FusedMap integrate_views(const std::vector<std::pair<ViewFrame, Raster>>& maps, int out_width,
                         int out_height, int jobs, SampleMode sample_mode) {
  if (maps.empty()) throw EmptyInputError("integrate_views: no view maps");
  int side = maps.front().second.width();
  std::vector<double> tan_half(maps.size());
  for (std::size_t n = 0; n < maps.size(); ++n) {
    const Raster& r = maps[n].second;
    if (r.width() != r.height() || r.width() != side) {
      throw ShapeMismatchError("integrate_views: all view maps must be square with one side");
    }
    tan_half[n] = std::tan(maps[n].first.fov / 2);
  }

  FusedMap fused;
  fused.map = Raster(out_width, out_height, 0.0);
  fused.coverage.assign(fused.map.size(), 0);
  std::vector<long> row_uncovered(out_height, 0);

  parallel_for(out_height, jobs, [&](int r) {
    for (int c = 0; c < out_width; ++c) {
      Direction3 dir =
          spherical_to_direction(equirect_pixel_to_spherical(c, r, out_width, out_height));
      double acc = 0.0;
      int count = 0;
      for (std::size_t n = 0; n < maps.size(); ++n) {
        ViewProjection p = project_to_view(dir, maps[n].first);
        if (!p.covered) continue;
        double col = detail::view_planar_to_pixel(p.u, side, tan_half[n]);
        double row = detail::view_planar_to_pixel(p.v, side, tan_half[n]);
        if (sample_mode == SampleMode::bilinear) {
          acc += sample_bilinear(maps[n].second, col, row, /*wrap_horizontal=*/false);
        } else {
          int ic = std::clamp(static_cast<int>(std::lround(col)), 0, side - 1);
          int ir = std::clamp(static_cast<int>(std::lround(row)), 0, side - 1);
          acc += maps[n].second.at(ir, ic);
        }
        ++count;
      }
      std::size_t idx = fused.map.index(r, c);
      fused.coverage[idx] = count;
      if (count > 0) {
        fused.map[idx] = acc / count;
      } else {
        ++row_uncovered[r];
      }
    }
  });
  for (long u : row_uncovered) fused.uncovered_count += u;
  return fused;
}

namespace {

FusedMap run_pipeline(const Raster& odi, const SaliencyBackend& backend, const ViewGrid& grid,
                      const Prior& prior, const EstimateOptions& opts) {
  std::vector<PlanarView> views = extract_views(odi, grid, opts.view_side, opts.source_id,
                                                opts.jobs);

  const auto* lat_bias = std::get_if<LatitudeBiasSet>(&prior);
  std::vector<std::pair<ViewFrame, Raster>> view_maps(views.size());
  parallel_for(static_cast<int>(views.size()), opts.jobs, [&](int i) {
    const PlanarView& view = views[i];
    ViewContext ctx{view.source_id, rad_to_deg(view.frame.theta_c), rad_to_deg(view.frame.phi_c)};
    Raster pred = backend.predict(view.image, /*apply_center_bias=*/false, ctx);
    if (lat_bias) {
      const LatitudeBiasEntry* entry = lat_bias->find(view.frame.phi_c);
      if (!entry) {
        throw MissingLatitudeError("no latitude bias for phi_c = " +
                                   std::to_string(rad_to_deg(view.frame.phi_c)) + " deg");
      }
      Raster weights = entry->bias.same_shape(pred)
                           ? entry->bias
                           : resize_bilinear(entry->bias, pred.width(), pred.height());
      pred = multiply(pred, weights);
    }
    view_maps[i] = {view.frame, std::move(pred)};
  });

  FusedMap fused =
      integrate_views(view_maps, odi.width(), odi.height(), opts.jobs, opts.sample_mode);

  if (const auto* eq = std::get_if<EquatorBias>(&prior)) {
    if (!eq->map.same_shape(fused.map)) {
      throw BiasShapeMismatchError("equator bias is " + std::to_string(eq->map.width()) + "x" +
                                   std::to_string(eq->map.height()) + " but output is " +
                                   std::to_string(fused.map.width()) + "x" +
                                   std::to_string(fused.map.height()));
    }
    fused.map = multiply(fused.map, eq->map);
  }
  return fused;
}

}  // namespace

FusedMap estimate_unblurred(const Raster& odi, const SaliencyBackend& backend,
                            const ViewGrid& grid, const Prior& prior,
                            const EstimateOptions& opts) {
  return run_pipeline(odi, backend, grid, prior, opts);
}

FusedMap estimate(const Raster& odi, const SaliencyBackend& backend, const ViewGrid& grid,
                  const Prior& prior, const BlurSpec& blur, const EstimateOptions& opts) {
  FusedMap fused = run_pipeline(odi, backend, grid, prior, opts);
  fused.map = normalize_sum(gaussian_blur(fused.map, blur));
  fused.normalized = true;
  return fused;
}

}  // namespace odisal
