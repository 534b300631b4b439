#include "odisal/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace odisal {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw InvalidArgumentError("raster dimensions must be >= 1, got " + std::to_string(width) +
                               "x" + std::to_string(height));
  }
}

// Maps an out-of-range 1D index back into [0, n) per the boundary rule.
inline int resolve_index(int i, int n, Boundary b) {
  switch (b) {
    case Boundary::wrap: {
      int m = i % n;
      return m < 0 ? m + n : m;
    }
    case Boundary::reflect: {
      // Edge-repeating mirror with period 2n: ..., 1, 0 | 0, 1, ..., n-1 | n-1, n-2, ...
      int period = 2 * n;
      int m = i % period;
      if (m < 0) m += period;
      return m < n ? m : period - 1 - m;
    }
    case Boundary::clamp:
      return std::clamp(i, 0, n - 1);
  }
  return 0;
}

std::vector<double> gaussian_kernel(double sigma) {
  int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double total = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    double w = std::exp(-0.5 * (t * t) / (sigma * sigma));
    k[t + radius] = w;
    total += w;
  }
  for (double& w : k) w /= total;
  return k;
}

enum class Pass { gather, scatter };

// One separable pass along a row or column. gather computes the forward
// convolution; scatter computes its exact adjoint.
void blur_pass_horizontal(const Raster& src, Raster& dst, const std::vector<double>& kernel,
                          Boundary boundary, Pass pass) {
  int w = src.width();
  int h = src.height();
  int radius = (static_cast<int>(kernel.size()) - 1) / 2;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (pass == Pass::gather) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t) {
          acc += kernel[t + radius] * src.at(r, resolve_index(c + t, w, boundary));
        }
        dst.at(r, c) = acc;
      } else {
        double v = src.at(r, c);
        for (int t = -radius; t <= radius; ++t) {
          dst.at(r, resolve_index(c + t, w, boundary)) += kernel[t + radius] * v;
        }
      }
    }
  }
}

void blur_pass_vertical(const Raster& src, Raster& dst, const std::vector<double>& kernel,
                        Boundary boundary, Pass pass) {
  int w = src.width();
  int h = src.height();
  int radius = (static_cast<int>(kernel.size()) - 1) / 2;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (pass == Pass::gather) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t) {
          acc += kernel[t + radius] * src.at(resolve_index(r + t, h, boundary), c);
        }
        dst.at(r, c) = acc;
      } else {
        double v = src.at(r, c);
        for (int t = -radius; t <= radius; ++t) {
          dst.at(resolve_index(r + t, h, boundary), c) += kernel[t + radius] * v;
        }
      }
    }
  }
}

void validate_blur_spec(const BlurSpec& spec) {
  if (!(spec.sigma >= 0.0)) {
    throw InvalidArgumentError("blur sigma must be >= 0");
  }
  if (spec.horizontal == Boundary::clamp) {
    throw InvalidArgumentError("horizontal blur boundary must be wrap or reflect");
  }
  if (spec.vertical == Boundary::wrap) {
    throw InvalidArgumentError("vertical blur boundary must be reflect or clamp");
  }
}

Raster blur_impl(const Raster& map, const BlurSpec& spec, Pass pass) {
  validate_blur_spec(spec);
  if (spec.sigma == 0.0) return map;
  std::vector<double> kernel = gaussian_kernel(spec.sigma);
  Raster tmp(map.width(), map.height(), 0.0);
  Raster out(map.width(), map.height(), 0.0);
  if (pass == Pass::gather) {
    blur_pass_horizontal(map, tmp, kernel, spec.horizontal, pass);
    blur_pass_vertical(tmp, out, kernel, spec.vertical, pass);
  } else {
    // Adjoint applies the transposed passes in reverse order.
    blur_pass_vertical(map, tmp, kernel, spec.vertical, pass);
    blur_pass_horizontal(tmp, out, kernel, spec.horizontal, pass);
  }
  return out;
}

}  // namespace

Raster::Raster(int width, int height, double fill) : width_(width), height_(height) {
  check_dims(width, height);
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

Raster::Raster(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height);
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw InvalidArgumentError("raster value count does not match dimensions");
  }
}

double Raster::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

double Raster::min() const { return *std::min_element(values_.begin(), values_.end()); }

double Raster::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool Raster::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool Raster::all_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

Image::Image(Raster r, Raster g, Raster b) {
  if (!r.same_shape(g) || !r.same_shape(b)) {
    throw ShapeMismatchError("RGB planes must share one shape");
  }
  planes.push_back(std::move(r));
  planes.push_back(std::move(g));
  planes.push_back(std::move(b));
}

Raster Image::luma() const {
  if (planes.empty()) throw EmptyInputError("image has no planes");
  if (planes.size() == 1) return planes.front();
  if (planes.size() != 3) throw InvalidArgumentError("image must have 1 or 3 planes");
  Raster out(width(), height(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.299 * planes[0][i] + 0.587 * planes[1][i] + 0.114 * planes[2][i];
  }
  return out;
}

Raster normalize_sum(const Raster& map) {
  if (!map.all_nonnegative()) {
    throw InvalidArgumentError("normalize_sum requires non-negative values");
  }
  double total = map.sum();
  if (total <= 0.0) {
    throw ZeroMassError("normalize_sum on an all-zero map");
  }
  Raster out = map;
  for (double& v : out.values()) v /= total;
  return out;
}

Raster gaussian_blur(const Raster& map, const BlurSpec& spec) {
  return blur_impl(map, spec, Pass::gather);
}

Raster gaussian_blur_adjoint(const Raster& map, const BlurSpec& spec) {
  return blur_impl(map, spec, Pass::scatter);
}

BilinearTaps bilinear_taps(const Raster& map, double x, double y, bool wrap_horizontal) {
  int w = map.width();
  int h = map.height();
  if (wrap_horizontal) {
    x = std::fmod(x, static_cast<double>(w));
    if (x < 0.0) x += w;
  } else {
    x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  }
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));

  int x0 = static_cast<int>(std::floor(x));
  int y0 = static_cast<int>(std::floor(y));
  if (x0 > w - 1) x0 = w - 1;
  if (y0 > h - 1) y0 = h - 1;
  double fx = x - x0;
  double fy = y - y0;
  int x1 = wrap_horizontal ? (x0 + 1) % w : std::min(x0 + 1, w - 1);
  int y1 = std::min(y0 + 1, h - 1);

  return BilinearTaps{{
      {map.index(y0, x0), (1.0 - fx) * (1.0 - fy)},
      {map.index(y0, x1), fx * (1.0 - fy)},
      {map.index(y1, x0), (1.0 - fx) * fy},
      {map.index(y1, x1), fx * fy},
  }};
}

double sample_bilinear(const Raster& map, double x, double y, bool wrap_horizontal) {
  BilinearTaps taps = bilinear_taps(map, x, y, wrap_horizontal);
  double acc = 0.0;
  for (const BilinearTap& t : taps) acc += t.weight * map[t.index];
  return acc;
}

Raster resize_bilinear(const Raster& map, int new_width, int new_height) {
  check_dims(new_width, new_height);
  Raster out(new_width, new_height, 0.0);
  double sx = static_cast<double>(map.width()) / new_width;
  double sy = static_cast<double>(map.height()) / new_height;
  for (int r = 0; r < new_height; ++r) {
    double y = (r + 0.5) * sy - 0.5;
    for (int c = 0; c < new_width; ++c) {
      double x = (c + 0.5) * sx - 0.5;
      out.at(r, c) = sample_bilinear(map, x, y, /*wrap_horizontal=*/false);
    }
  }
  return out;
}

Raster resize_bilinear_adjoint(const Raster& grad, int orig_width, int orig_height) {
  check_dims(orig_width, orig_height);
  Raster out(orig_width, orig_height, 0.0);
  double sx = static_cast<double>(orig_width) / grad.width();
  double sy = static_cast<double>(orig_height) / grad.height();
  for (int r = 0; r < grad.height(); ++r) {
    double y = (r + 0.5) * sy - 0.5;
    for (int c = 0; c < grad.width(); ++c) {
      double x = (c + 0.5) * sx - 0.5;
      BilinearTaps taps = bilinear_taps(out, x, y, /*wrap_horizontal=*/false);
      double g = grad.at(r, c);
      for (const BilinearTap& t : taps) out[t.index] += t.weight * g;
    }
  }
  return out;
}

Raster multiply(const Raster& a, const Raster& b) {
  if (!a.same_shape(b)) throw ShapeMismatchError("multiply: raster shapes differ");
  Raster out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

Raster add_scaled(const Raster& a, const Raster& b, double s) {
  if (!a.same_shape(b)) throw ShapeMismatchError("add_scaled: raster shapes differ");
  Raster out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * b[i];
  return out;
}

Raster scale(const Raster& a, double s) {
  Raster out = a;
  for (double& v : out.values()) v *= s;
  return out;
}

}  // namespace odisal
