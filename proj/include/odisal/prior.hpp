#pragma once

#include <memory>
#include <string>
#include <vector>

#include "odisal/bias.hpp"
#include "odisal/fusion.hpp"

namespace odisal {

enum class FitLoss { kl, mse };

/// Hyperparameters of the Method B bias fit. Biases are parameterized on a
/// coarse bias_resolution^2 grid per latitude and bilinearly upsampled to
/// view resolution, which regularizes fits on small training sets.
struct FitConfig {
  double learning_rate = 1.0;
  int iterations = 100;
  int bias_resolution = 25;
  FitLoss loss = FitLoss::kl;
  int view_side = 64;
  double blur_sigma = 0.0;
};

struct TrainExample {
  Raster odi;
  Raster gt;  // normalized ground-truth saliency map, same shape as odi
  std::string source_id;
};

struct FitResult {
  LatitudeBiasSet biases;
  std::vector<double> loss_trace;  // [0] = loss at initialization
};

/// Method A prior: pixelwise mean of normalized training saliency maps.
EquatorBias average_equator_bias(const std::vector<Raster>& gt_maps);

/// Method B training objective: mean loss of the estimation pipeline over a
/// training set, as a function of the coarse per-latitude bias grids. The
/// view geometry, backend predictions, and integration taps are precomputed
/// once; loss and analytic gradient evaluations then share them.
class LatitudeBiasObjective {
 public:
  LatitudeBiasObjective(const std::vector<TrainExample>& train, const SaliencyBackend& backend,
                        const ViewGrid& grid, const FitConfig& config);
  ~LatitudeBiasObjective();

  LatitudeBiasObjective(const LatitudeBiasObjective&) = delete;
  LatitudeBiasObjective& operator=(const LatitudeBiasObjective&) = delete;

  const std::vector<double>& latitudes() const;  // ascending, radians
  int bias_resolution() const;

  /// All-ones coarse grids, the fit initialization.
  std::vector<Raster> initial_biases() const;

  double loss(const std::vector<Raster>& biases) const;

  /// Returns the loss and fills `gradient` (same shapes as `biases`) with
  /// the analytic derivative of the mean training loss.
  double loss_and_gradient(const std::vector<Raster>& biases,
                           std::vector<Raster>& gradient) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Learns per-latitude biases by projected gradient descent on the
/// LatitudeBiasObjective: weights start at 1, every accepted step keeps them
/// >= 0, and the step size is halved until the trial loss stops increasing.
/// Throws DivergenceError when no finite-loss step exists.
FitResult fit_latitude_bias(const std::vector<TrainExample>& train,
                            const SaliencyBackend& backend, const ViewGrid& grid,
                            const FitConfig& config);

/// Integrates the per-view bias maps into one equirectangular raster, for
/// analysis and visualization of the learned prior.
Raster compose_bias_equirect(const LatitudeBiasSet& set, const ViewGrid& grid, int out_width,
                             int out_height);

}  // namespace odisal
