#include <cmath>
#include <complex>
#include <vector>

#include "odisal/backend.hpp"
#include "odisal/geometry.hpp"

namespace odisal {

namespace {

using Complex = std::complex<double>;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey transform, in place.
void fft_1d(Complex* data, int n, int stride, bool inverse) {
  // Bit-reversal permutation.
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i * stride], data[j * stride]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    double angle = 2.0 * kPi / len * (inverse ? 1.0 : -1.0);
    Complex wlen(std::cos(angle), std::sin(angle));
    for (int i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        Complex a = data[(i + k) * stride];
        Complex b = data[(i + k + len / 2) * stride] * w;
        data[(i + k) * stride] = a + b;
        data[(i + k + len / 2) * stride] = a - b;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (int i = 0; i < n; ++i) data[i * stride] /= n;
  }
}

void fft_2d(std::vector<Complex>& grid, int n, bool inverse) {
  for (int r = 0; r < n; ++r) fft_1d(grid.data() + static_cast<std::size_t>(r) * n, n, 1, inverse);
  for (int c = 0; c < n; ++c) fft_1d(grid.data() + c, n, n, inverse);
}

// 3x3 mean with edge-repeating reflection, matching the Boundary::reflect
// convention used elsewhere.
Raster box_mean_3x3(const Raster& src) {
  int w = src.width();
  int h = src.height();
  Raster out(w, h, 0.0);
  auto ref = [](int i, int n) { return i < 0 ? -1 - i : (i >= n ? 2 * n - 1 - i : i); };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          acc += src.at(ref(r + dr, h), ref(c + dc, w));
        }
      }
      out.at(r, c) = acc / 9.0;
    }
  }
  return out;
}

}  // namespace

SpectralResidualBackend::SpectralResidualBackend(int working_size, double post_blur_sigma)
    : working_size_(working_size), post_blur_sigma_(post_blur_sigma) {
  if (!is_power_of_two(working_size)) {
    throw InvalidArgumentError("spectral working size must be a power of two");
  }
  if (post_blur_sigma < 0.0) {
    throw InvalidArgumentError("spectral post-blur sigma must be >= 0");
  }
}

Raster SpectralResidualBackend::predict_raw(const Image& image, const ViewContext&) const {
  Raster gray = resize_bilinear(image.luma(), working_size_, working_size_);

  // Remove the mean so the DC bin carries no brightness term; the residual
  // then measures structure only and the output is exactly invariant to a
  // global intensity scale.
  double mean = gray.sum() / gray.size();
  for (double& v : gray.values()) v -= mean;

  int n = working_size_;
  std::vector<Complex> spectrum(static_cast<std::size_t>(n) * n);
  for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] = Complex(gray[i], 0.0);
  fft_2d(spectrum, n, /*inverse=*/false);

  double peak = 0.0;
  for (const Complex& c : spectrum) peak = std::max(peak, std::abs(c));
  if (peak <= 0.0) {
    // Featureless input: nothing is more salient than anything else.
    return Raster(image.width(), image.height(), 1.0);
  }
  double floor = 1e-9 * peak;

  Raster log_amp(n, n, 0.0);
  Raster phase(n, n, 0.0);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    log_amp[i] = std::log(std::max(std::abs(spectrum[i]), floor));
    phase[i] = std::arg(spectrum[i]);
  }

  Raster residual = box_mean_3x3(log_amp);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    double amp = std::exp(log_amp[i] - residual[i]);
    spectrum[i] = Complex(amp * std::cos(phase[i]), amp * std::sin(phase[i]));
  }
  fft_2d(spectrum, n, /*inverse=*/true);

  Raster energy(n, n, 0.0);
  for (std::size_t i = 0; i < spectrum.size(); ++i) energy[i] = std::norm(spectrum[i]);

  if (post_blur_sigma_ > 0.0) {
    energy = gaussian_blur(energy, {post_blur_sigma_, Boundary::reflect, Boundary::reflect});
  }
  return resize_bilinear(energy, image.width(), image.height());
}

}  // namespace odisal
