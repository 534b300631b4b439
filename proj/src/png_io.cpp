#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include "odisal/io.hpp"

namespace odisal::detail {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

Image read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }

  // All buffers are allocated before the setjmp region so no destructor is
  // skipped on a libpng longjmp.
  std::vector<png_byte> data;
  std::vector<png_bytep> rows;
  volatile png_uint_32 width = 0, height = 0;
  volatile int bit_depth = 0, channels = 0;
  volatile bool failed = false;

  {
    if (setjmp(png_jmpbuf(png))) {
      failed = true;
    } else {
      png_init_io(png, fp.get());
      png_read_info(png, info);
      width = png_get_image_width(png, info);
      height = png_get_image_height(png, info);
      bit_depth = png_get_bit_depth(png, info);
      int color_type = png_get_color_type(png, info);

      if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
      if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
      if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
      if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
      png_read_update_info(png, info);

      bit_depth = png_get_bit_depth(png, info);
      channels = png_get_channels(png, info);
      std::size_t rowbytes = png_get_rowbytes(png, info);
      data.resize(rowbytes * height);
      rows.resize(height);
      for (png_uint_32 r = 0; r < height; ++r) rows[r] = data.data() + r * rowbytes;
      png_read_image(png, rows.data());
      png_read_end(png, nullptr);
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (failed) throw IoError("failed to decode PNG " + path.string());
  int nch = channels;
  int depth = bit_depth;
  if (nch != 1 && nch != 3) {
    throw IoError("unsupported PNG channel count " + std::to_string(nch) + " in " +
                  path.string());
  }

  int w = static_cast<int>(width);
  int h = static_cast<int>(height);
  Image out;
  for (int p = 0; p < nch; ++p) out.planes.emplace_back(w, h, 0.0);

  std::size_t rowbytes = static_cast<std::size_t>(w) * nch * (depth / 8);
  for (int r = 0; r < h; ++r) {
    const png_byte* row = data.data() + static_cast<std::size_t>(r) * rowbytes;
    for (int c = 0; c < w; ++c) {
      for (int p = 0; p < nch; ++p) {
        double v;
        if (depth == 16) {
          // PNG 16-bit samples are big-endian.
          std::size_t i = (static_cast<std::size_t>(c) * nch + p) * 2;
          v = ((row[i] << 8) | row[i + 1]) / 65535.0;
        } else {
          v = row[static_cast<std::size_t>(c) * nch + p] / 255.0;
        }
        out.planes[p].at(r, c) = v;
      }
    }
  }
  return out;
}

namespace {

void write_png_impl(const std::filesystem::path& path, int width, int height, int channels,
                    int bit_depth, const std::vector<png_byte>& data) {
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw IoError("cannot open " + path.string() + " for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }

  std::vector<png_bytep> rows(height);
  std::size_t rowbytes = static_cast<std::size_t>(width) * channels * (bit_depth / 8);
  for (int r = 0; r < height; ++r) {
    rows[r] = const_cast<png_bytep>(data.data() + r * rowbytes);
  }

  volatile bool failed = false;
  {
    if (setjmp(png_jmpbuf(png))) {
      failed = true;
    } else {
      png_init_io(png, fp.get());
      int color_type = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
      png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                   PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
      png_write_info(png, info);
      png_write_image(png, rows.data());
      png_write_end(png, nullptr);
    }
  }
  png_destroy_write_struct(&png, &info);
  if (failed) throw IoError("failed to encode PNG " + path.string());
}

png_byte quantize8(double v) {
  return static_cast<png_byte>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

void write_png_gray16(const std::filesystem::path& path, const Raster& map) {
  int w = map.width();
  int h = map.height();
  std::vector<png_byte> data(static_cast<std::size_t>(w) * h * 2);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      auto q = static_cast<std::uint16_t>(std::lround(std::clamp(map.at(r, c), 0.0, 1.0) * 65535.0));
      std::size_t i = (map.index(r, c)) * 2;
      data[i] = static_cast<png_byte>(q >> 8);
      data[i + 1] = static_cast<png_byte>(q & 0xff);
    }
  }
  write_png_impl(path, w, h, 1, 16, data);
}

void write_png8(const std::filesystem::path& path, const Image& image) {
  if (image.planes.size() != 1 && image.planes.size() != 3) {
    throw InvalidArgumentError("PNG output requires 1 or 3 planes");
  }
  int w = image.width();
  int h = image.height();
  int channels = static_cast<int>(image.planes.size());
  std::vector<png_byte> data(static_cast<std::size_t>(w) * h * channels);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int p = 0; p < channels; ++p) {
        data[(static_cast<std::size_t>(r) * w + c) * channels + p] =
            quantize8(image.planes[p].at(r, c));
      }
    }
  }
  write_png_impl(path, w, h, channels, 8, data);
}

}  // namespace odisal::detail
