#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>

#include "odisal/raster.hpp"

namespace odisal {

/// Multiplicative per-pixel weights applied after the raw prediction when
/// center-biased output is requested.
struct CenterBiasLayer {
  Raster weights;

  explicit CenterBiasLayer(Raster w);
};

/// Identifies the view a prediction belongs to, for backends keyed on
/// (image id, viewing direction). Empty for plain 2D prediction.
struct ViewContext {
  std::string source_id;
  double theta_c_deg = 0.0;
  double phi_c_deg = 0.0;
};

/// Per-view saliency predictor. Outputs are non-negative and deliberately
/// unnormalized so cross-view magnitudes stay comparable.
class SaliencyBackend {
 public:
  virtual ~SaliencyBackend() = default;

  virtual std::string name() const = 0;
  virtual bool supports_without_bias() const { return true; }
  bool has_center_bias() const { return center_bias_.has_value(); }
  void set_center_bias(CenterBiasLayer layer) { center_bias_ = std::move(layer); }

  /// Throws UnsupportedModeError when apply_center_bias is set and the
  /// backend has no bias layer. Input must be at least 32x32.
  Raster predict(const Image& image, bool apply_center_bias, const ViewContext& ctx = {}) const;
  Raster predict(const Raster& gray, bool apply_center_bias, const ViewContext& ctx = {}) const;

 protected:
  virtual Raster predict_raw(const Image& image, const ViewContext& ctx) const = 0;

  std::optional<CenterBiasLayer> center_bias_;
};

/// Returns all-ones maps; isolates the prior machinery in tests.
class ConstantBackend : public SaliencyBackend {
 public:
  ConstantBackend() = default;
  explicit ConstantBackend(CenterBiasLayer bias) { set_center_bias(std::move(bias)); }

  std::string name() const override { return "constant"; }

 protected:
  Raster predict_raw(const Image& image, const ViewContext& ctx) const override;
};

/// Serves precomputed per-view maps from a manifest, one line per entry:
///   <image_id> <theta_c_deg> <phi_c_deg> <relative_path>
/// The integration path for externally-run neural predictors.
class FileBackend : public SaliencyBackend {
 public:
  explicit FileBackend(const std::filesystem::path& manifest_path);

  std::string name() const override { return "file"; }
  std::size_t entry_count() const { return maps_.size(); }

 protected:
  Raster predict_raw(const Image& image, const ViewContext& ctx) const override;

 private:
  std::unordered_map<std::string, Raster> maps_;
};

/// Classical frequency-domain saliency: the input is shrunk to a small
/// power-of-two working grid, the log-amplitude spectrum is replaced by its
/// residual against a 3x3 local mean, and the squared magnitude of the
/// inverse transform is lightly blurred and resized back.
class SpectralResidualBackend : public SaliencyBackend {
 public:
  explicit SpectralResidualBackend(int working_size = 64, double post_blur_sigma = 2.5);

  std::string name() const override { return "spectral"; }

 protected:
  Raster predict_raw(const Image& image, const ViewContext& ctx) const override;

 private:
  int working_size_;
  double post_blur_sigma_;
};

}  // namespace odisal
