#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "odisal/errors.hpp"

namespace odisal {

/// Integer pixel location on a raster grid.
struct PixelCoord {
  int row = 0;
  int col = 0;
};

/// Value-semantic 2D grid of doubles, row-major. The carrier for images,
/// saliency maps, and bias maps.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, double fill = 0.0);
  Raster(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  double& at(int row, int col) { return values_[index(row, col)]; }
  double at(int row, int col) const { return values_[index(row, col)]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double sum() const;
  double min() const;
  double max() const;
  bool all_finite() const;
  bool all_nonnegative() const;

  bool same_shape(const Raster& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

/// One- or three-plane image (grayscale or RGB), all planes same shape.
struct Image {
  std::vector<Raster> planes;

  Image() = default;
  explicit Image(Raster gray) { planes.push_back(std::move(gray)); }
  Image(Raster r, Raster g, Raster b);

  int width() const { return planes.empty() ? 0 : planes.front().width(); }
  int height() const { return planes.empty() ? 0 : planes.front().height(); }
  bool rgb() const { return planes.size() == 3; }

  /// Rec.601 luma for RGB; identity for grayscale.
  Raster luma() const;
};

enum class Boundary {
  wrap,     // periodic
  reflect,  // edge-repeating mirror: x[-1] = x[0]
  clamp,    // edge replication: x[-k] = x[0]
};

/// Gaussian blur parameters. sigma = 0 means identity.
struct BlurSpec {
  double sigma = 0.0;
  Boundary horizontal = Boundary::wrap;
  Boundary vertical = Boundary::reflect;
};

/// Scales a non-negative raster so its values sum to 1.
/// Throws ZeroMassError when the input sums to zero.
Raster normalize_sum(const Raster& map);

/// Separable Gaussian blur, kernel truncated at +/-3 sigma and renormalized.
/// Horizontal boundary must be wrap or reflect; vertical reflect or clamp.
Raster gaussian_blur(const Raster& map, const BlurSpec& spec);

/// Adjoint of gaussian_blur as a linear operator (scatter form of the same
/// kernel and boundary rules). Used by gradient-based fitting.
Raster gaussian_blur_adjoint(const Raster& map, const BlurSpec& spec);

/// One bilinear tap: flat index into the raster plus its weight.
struct BilinearTap {
  std::size_t index = 0;
  double weight = 0.0;
};

using BilinearTaps = std::array<BilinearTap, 4>;

/// The four-neighbor taps for sampling at continuous (x, y); y is clamped to
/// [0, height-1], x wraps modulo width when wrap_horizontal, else clamps.
BilinearTaps bilinear_taps(const Raster& map, double x, double y, bool wrap_horizontal);

/// Bilinear interpolation at continuous column x / row y.
double sample_bilinear(const Raster& map, double x, double y, bool wrap_horizontal);

/// Bilinear resize with pixel-center (area) mapping and edge clamping.
Raster resize_bilinear(const Raster& map, int new_width, int new_height);

/// Adjoint of resize_bilinear(., new_w, new_h) applied to a gradient of the
/// resized raster; returns a raster of the original shape.
Raster resize_bilinear_adjoint(const Raster& grad, int orig_width, int orig_height);

/// Elementwise product. Throws ShapeMismatchError.
Raster multiply(const Raster& a, const Raster& b);

/// a + s * b. Throws ShapeMismatchError.
Raster add_scaled(const Raster& a, const Raster& b, double s);

Raster scale(const Raster& a, double s);

}  // namespace odisal
