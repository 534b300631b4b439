#include "odisal/prior.hpp"

#include <algorithm>
#include <cmath>

#include "odisal/metrics.hpp"

namespace odisal {

EquatorBias average_equator_bias(const std::vector<Raster>& gt_maps) {
  if (gt_maps.empty()) throw EmptyInputError("average_equator_bias: no maps");
  const Raster& first = gt_maps.front();
  for (const Raster& m : gt_maps) {
    if (!m.same_shape(first)) {
      throw ShapeMismatchError("average_equator_bias: map shapes differ");
    }
    if (std::abs(m.sum() - 1.0) > 1e-6) {
      throw InvalidArgumentError("average_equator_bias: maps must be normalized to sum 1");
    }
  }
  Raster mean(first.width(), first.height(), 0.0);
  for (const Raster& m : gt_maps) {
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += m[i];
  }
  for (double& v : mean.values()) v /= static_cast<double>(gt_maps.size());
  return EquatorBias{std::move(mean)};
}

namespace {

constexpr double kKlEps = 1e-10;

void validate_fit_config(const FitConfig& config) {
  if (!(config.learning_rate > 0.0)) throw InvalidArgumentError("learning_rate must be > 0");
  if (config.iterations < 0) throw InvalidArgumentError("iterations must be >= 0");
  if (config.bias_resolution < 4) throw InvalidArgumentError("bias_resolution must be >= 4");
  if (config.view_side < 32) throw InvalidArgumentError("view_side must be >= 32");
  if (config.blur_sigma < 0.0) throw InvalidArgumentError("blur_sigma must be >= 0");
}

}  // namespace

struct LatitudeBiasObjective::Impl {
  FitConfig config;
  BlurSpec blur;  // wrap/reflect, sigma from config
  std::vector<double> latitudes;
  std::vector<int> frame_latitude;  // frame index -> latitude index

  // Integration geometry shared by all training images: for each output
  // pixel, the covering (view, 4-tap) entries in frame order.
  struct PlanTap {
    int view = 0;
    BilinearTaps taps;
  };
  std::vector<PlanTap> entries;
  std::vector<int> pixel_begin;  // size npix + 1
  std::vector<int> coverage;     // covering-view count per pixel

  // Bilinear upsampling taps, view pixel -> coarse grid, shared by all views.
  std::vector<BilinearTaps> up_taps;

  // Per image: ground truth and per-view backend predictions (no bias).
  std::vector<Raster> gts;
  std::vector<std::vector<Raster>> predictions;

  int out_width = 0;
  int out_height = 0;

  std::vector<Raster> upsample_all(const std::vector<Raster>& biases) const {
    int side = config.view_side;
    std::vector<Raster> up;
    up.reserve(biases.size());
    for (const Raster& b : biases) {
      Raster r(side, side, 0.0);
      for (std::size_t j = 0; j < r.size(); ++j) {
        double acc = 0.0;
        for (const BilinearTap& t : up_taps[j]) acc += t.weight * b[t.index];
        r[j] = acc;
      }
      up.push_back(std::move(r));
    }
    return up;
  }

  // Forward pass for one image; returns the normalized prediction P and its
  // pre-normalization blurred map L plus total mass Z (needed by backward).
  double forward(int image, const std::vector<Raster>& up, Raster* out_pred, Raster* out_blurred,
                 double* out_mass) const {
    const std::vector<Raster>& preds = predictions[image];
    Raster fused(out_width, out_height, 0.0);
    std::size_t npix = fused.size();
    for (std::size_t p = 0; p < npix; ++p) {
      if (coverage[p] == 0) continue;
      double acc = 0.0;
      for (int e = pixel_begin[p]; e < pixel_begin[p + 1]; ++e) {
        const PlanTap& pt = entries[e];
        const Raster& s = preds[pt.view];
        const Raster& b = up[frame_latitude[pt.view]];
        for (const BilinearTap& t : pt.taps) {
          acc += t.weight * s[t.index] * b[t.index];
        }
      }
      fused[p] = acc / coverage[p];
    }

    Raster blurred = config.blur_sigma > 0.0 ? gaussian_blur(fused, blur) : fused;
    double mass = blurred.sum();
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      throw ZeroMassError("Method B fit produced a zero-mass prediction");
    }
    Raster pred = blurred;
    for (double& v : pred.values()) v /= mass;

    const Raster& gt = gts[image];
    double value;
    if (config.loss == FitLoss::kl) {
      value = kl_div(gt, pred);
    } else {
      double acc = 0.0;
      for (std::size_t p = 0; p < npix; ++p) {
        double d = pred[p] - gt[p];
        acc += d * d;
      }
      value = acc / static_cast<double>(npix);
    }
    if (out_pred) *out_pred = std::move(pred);
    if (out_blurred) *out_blurred = std::move(blurred);
    if (out_mass) *out_mass = mass;
    return value;
  }

  // Accumulates d(loss_image)/d(upsampled bias) into grad_up.
  void backward(int image, const Raster& pred, const Raster& blurred, double mass,
                std::vector<Raster>& grad_up) const {
    const Raster& gt = gts[image];
    std::size_t npix = pred.size();

    Raster g_pred(out_width, out_height, 0.0);
    if (config.loss == FitLoss::kl) {
      for (std::size_t p = 0; p < npix; ++p) g_pred[p] = -gt[p] / (pred[p] + kKlEps);
    } else {
      for (std::size_t p = 0; p < npix; ++p) {
        g_pred[p] = 2.0 * (pred[p] - gt[p]) / static_cast<double>(npix);
      }
    }

    // Through the normalization P = L / sum(L).
    double dot = 0.0;
    for (std::size_t p = 0; p < npix; ++p) dot += g_pred[p] * blurred[p];
    Raster g_blurred(out_width, out_height, 0.0);
    for (std::size_t p = 0; p < npix; ++p) {
      g_blurred[p] = (g_pred[p] - dot / mass) / mass;
    }

    Raster g_fused =
        config.blur_sigma > 0.0 ? gaussian_blur_adjoint(g_blurred, blur) : g_blurred;

    const std::vector<Raster>& preds = predictions[image];
    for (std::size_t p = 0; p < npix; ++p) {
      if (coverage[p] == 0) continue;
      double g = g_fused[p] / coverage[p];
      for (int e = pixel_begin[p]; e < pixel_begin[p + 1]; ++e) {
        const PlanTap& pt = entries[e];
        const Raster& s = preds[pt.view];
        Raster& gb = grad_up[frame_latitude[pt.view]];
        for (const BilinearTap& t : pt.taps) {
          gb[t.index] += g * t.weight * s[t.index];
        }
      }
    }
  }
};

LatitudeBiasObjective::LatitudeBiasObjective(const std::vector<TrainExample>& train,
                                             const SaliencyBackend& backend, const ViewGrid& grid,
                                             const FitConfig& config)
    : impl_(std::make_unique<Impl>()) {
  validate_fit_config(config);
  if (train.empty()) throw EmptyInputError("fit_latitude_bias: empty training set");
  if (grid.frames.empty()) throw EmptyInputError("fit_latitude_bias: empty view grid");

  impl_->config = config;
  impl_->blur = BlurSpec{config.blur_sigma, Boundary::wrap, Boundary::reflect};
  impl_->out_width = train.front().gt.width();
  impl_->out_height = train.front().gt.height();

  for (const TrainExample& ex : train) {
    if (!ex.gt.same_shape(train.front().gt) || !ex.odi.same_shape(ex.gt)) {
      throw ShapeMismatchError("fit_latitude_bias: all odi/gt maps must share one shape");
    }
    if (std::abs(ex.gt.sum() - 1.0) > 1e-6) {
      throw InvalidArgumentError("fit_latitude_bias: gt maps must be normalized to sum 1");
    }
  }

  // Distinct latitudes, ascending.
  for (const ViewFrame& f : grid.frames) {
    bool known = false;
    for (double phi : impl_->latitudes) {
      if (std::abs(phi - f.phi_c) <= 1e-9) known = true;
    }
    if (!known) impl_->latitudes.push_back(f.phi_c);
  }
  std::sort(impl_->latitudes.begin(), impl_->latitudes.end());
  for (const ViewFrame& f : grid.frames) {
    for (std::size_t l = 0; l < impl_->latitudes.size(); ++l) {
      if (std::abs(impl_->latitudes[l] - f.phi_c) <= 1e-9) {
        impl_->frame_latitude.push_back(static_cast<int>(l));
        break;
      }
    }
  }

  // Integration plan (mirrors integrate_views' bilinear sampling exactly).
  int side = config.view_side;
  Raster view_template(side, side, 0.0);
  std::vector<double> tan_half(grid.frames.size());
  for (std::size_t n = 0; n < grid.frames.size(); ++n) {
    tan_half[n] = std::tan(grid.frames[n].fov / 2);
  }
  std::size_t npix = static_cast<std::size_t>(impl_->out_width) * impl_->out_height;
  impl_->pixel_begin.assign(npix + 1, 0);
  impl_->coverage.assign(npix, 0);
  for (int r = 0; r < impl_->out_height; ++r) {
    for (int c = 0; c < impl_->out_width; ++c) {
      Direction3 dir = spherical_to_direction(
          equirect_pixel_to_spherical(c, r, impl_->out_width, impl_->out_height));
      std::size_t p = static_cast<std::size_t>(r) * impl_->out_width + c;
      for (std::size_t n = 0; n < grid.frames.size(); ++n) {
        ViewProjection proj = project_to_view(dir, grid.frames[n]);
        if (!proj.covered) continue;
        double col = detail::view_planar_to_pixel(proj.u, side, tan_half[n]);
        double row = detail::view_planar_to_pixel(proj.v, side, tan_half[n]);
        Impl::PlanTap tap;
        tap.view = static_cast<int>(n);
        tap.taps = bilinear_taps(view_template, col, row, /*wrap_horizontal=*/false);
        impl_->entries.push_back(tap);
        ++impl_->coverage[p];
      }
      impl_->pixel_begin[p + 1] = static_cast<int>(impl_->entries.size());
    }
  }

  // Upsampling taps, matching resize_bilinear's pixel-center mapping.
  int res = config.bias_resolution;
  Raster coarse_template(res, res, 0.0);
  impl_->up_taps.resize(static_cast<std::size_t>(side) * side);
  double s = static_cast<double>(res) / side;
  for (int r = 0; r < side; ++r) {
    double y = (r + 0.5) * s - 0.5;
    for (int c = 0; c < side; ++c) {
      double x = (c + 0.5) * s - 0.5;
      impl_->up_taps[static_cast<std::size_t>(r) * side + c] =
          bilinear_taps(coarse_template, x, y, /*wrap_horizontal=*/false);
    }
  }

  // Backend predictions per image and view, without center bias.
  for (const TrainExample& ex : train) {
    impl_->gts.push_back(ex.gt);
    std::vector<Raster> preds;
    preds.reserve(grid.frames.size());
    for (const ViewFrame& frame : grid.frames) {
      Raster view = extract_view(ex.odi, frame, side);
      ViewContext ctx{ex.source_id, rad_to_deg(frame.theta_c), rad_to_deg(frame.phi_c)};
      preds.push_back(backend.predict(view, /*apply_center_bias=*/false, ctx));
    }
    impl_->predictions.push_back(std::move(preds));
  }
}

LatitudeBiasObjective::~LatitudeBiasObjective() = default;

const std::vector<double>& LatitudeBiasObjective::latitudes() const { return impl_->latitudes; }

int LatitudeBiasObjective::bias_resolution() const { return impl_->config.bias_resolution; }

std::vector<Raster> LatitudeBiasObjective::initial_biases() const {
  int res = impl_->config.bias_resolution;
  return std::vector<Raster>(impl_->latitudes.size(), Raster(res, res, 1.0));
}

double LatitudeBiasObjective::loss(const std::vector<Raster>& biases) const {
  std::vector<Raster> up = impl_->upsample_all(biases);
  double total = 0.0;
  for (std::size_t k = 0; k < impl_->gts.size(); ++k) {
    total += impl_->forward(static_cast<int>(k), up, nullptr, nullptr, nullptr);
  }
  return total / static_cast<double>(impl_->gts.size());
}

double LatitudeBiasObjective::loss_and_gradient(const std::vector<Raster>& biases,
                                                std::vector<Raster>& gradient) const {
  std::vector<Raster> up = impl_->upsample_all(biases);
  int side = impl_->config.view_side;
  std::vector<Raster> grad_up(impl_->latitudes.size(), Raster(side, side, 0.0));

  double total = 0.0;
  for (std::size_t k = 0; k < impl_->gts.size(); ++k) {
    Raster pred, blurred;
    double mass = 0.0;
    total += impl_->forward(static_cast<int>(k), up, &pred, &blurred, &mass);
    impl_->backward(static_cast<int>(k), pred, blurred, mass, grad_up);
  }

  double inv_count = 1.0 / static_cast<double>(impl_->gts.size());
  int res = impl_->config.bias_resolution;
  gradient.assign(impl_->latitudes.size(), Raster(res, res, 0.0));
  for (std::size_t l = 0; l < grad_up.size(); ++l) {
    const Raster& gb = grad_up[l];
    for (std::size_t j = 0; j < gb.size(); ++j) {
      for (const BilinearTap& t : impl_->up_taps[j]) {
        gradient[l][t.index] += t.weight * gb[j] * inv_count;
      }
    }
  }
  return total * inv_count;
}

FitResult fit_latitude_bias(const std::vector<TrainExample>& train,
                            const SaliencyBackend& backend, const ViewGrid& grid,
                            const FitConfig& config) {
  LatitudeBiasObjective objective(train, backend, grid, config);

  std::vector<Raster> biases = objective.initial_biases();
  FitResult result;
  result.loss_trace.push_back(objective.loss(biases));

  double lr = config.learning_rate;
  for (int iter = 0; iter < config.iterations; ++iter) {
    std::vector<Raster> gradient;
    double current = objective.loss_and_gradient(biases, gradient);

    auto take_step = [&](double step) {
      std::vector<Raster> trial = biases;
      for (std::size_t l = 0; l < trial.size(); ++l) {
        for (std::size_t i = 0; i < trial[l].size(); ++i) {
          trial[l][i] = std::max(0.0, trial[l][i] - step * gradient[l][i]);
        }
      }
      return trial;
    };

    std::vector<Raster> trial = take_step(lr);
    double trial_loss = objective.loss(trial);
    int halvings = 0;
    while ((!std::isfinite(trial_loss) || trial_loss > current) && halvings < 30) {
      lr /= 2.0;
      trial = take_step(lr);
      trial_loss = objective.loss(trial);
      ++halvings;
    }
    if (!std::isfinite(trial_loss)) {
      throw DivergenceError("Method B fit: loss became non-finite");
    }
    if (trial_loss > current) {
      // No improving step representable; the trace repeats the current loss.
      result.loss_trace.push_back(current);
      break;
    }
    biases = std::move(trial);
    result.loss_trace.push_back(trial_loss);
  }

  const std::vector<double>& latitudes = objective.latitudes();
  for (std::size_t l = 0; l < latitudes.size(); ++l) {
    result.biases.entries.push_back({latitudes[l], biases[l]});
  }
  return result;
}

Raster compose_bias_equirect(const LatitudeBiasSet& set, const ViewGrid& grid, int out_width,
                             int out_height) {
  if (grid.frames.empty()) throw EmptyInputError("compose_bias_equirect: empty grid");
  std::vector<std::pair<ViewFrame, Raster>> maps;
  maps.reserve(grid.frames.size());
  for (const ViewFrame& frame : grid.frames) {
    const LatitudeBiasEntry* entry = set.find(frame.phi_c);
    if (!entry) {
      throw MissingLatitudeError("no bias entry for latitude " +
                                 std::to_string(rad_to_deg(frame.phi_c)) + " deg");
    }
    maps.emplace_back(frame, entry->bias);
  }
  return integrate_views(maps, out_width, out_height).map;
}

}  // namespace odisal
