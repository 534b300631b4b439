#pragma once

#include <filesystem>

#include "odisal/raster.hpp"

namespace odisal {

/// Map/image file IO.
///
/// Two formats, chosen by extension:
///   .fmap — raw float32: ASCII header line "<width>,<height>\n" followed by
///           width*height little-endian float32 values, row-major. Lossless
///           up to float32 precision.
///   .png  — 16-bit grayscale for maps (values clamped to [0, 1]); images
///           load as grayscale or RGB with values scaled to [0, 1].

/// Loads a saliency/bias map (.fmap, or grayscale .png).
Raster load_map(const std::filesystem::path& path);

/// Saves a map; .png output quantizes clamped [0, 1] values to 16 bits.
void save_map(const std::filesystem::path& path, const Raster& map);

/// Loads an image; RGB PNGs keep their three planes.
Image load_image(const std::filesystem::path& path);

/// Writes an 8-bit PNG (grayscale or RGB) from [0, 1] planes.
void save_image_png8(const std::filesystem::path& path, const Image& image);

namespace detail {
Image read_png(const std::filesystem::path& path);
void write_png_gray16(const std::filesystem::path& path, const Raster& map);
void write_png8(const std::filesystem::path& path, const Image& image);
}  // namespace detail

}  // namespace odisal
