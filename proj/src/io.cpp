#include "odisal/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

namespace odisal {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext;
}

Raster load_fmap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw ParseError(path.string() + ":1: missing fmap header");
  int width = 0, height = 0;
  if (std::sscanf(header.c_str(), "%d,%d", &width, &height) != 2 || width < 1 || height < 1) {
    throw ParseError(path.string() + ":1: bad fmap header '" + header + "'");
  }
  std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<unsigned char> bytes(count * 4);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
    throw ParseError(path.string() + ": truncated fmap payload");
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t u = static_cast<std::uint32_t>(bytes[4 * i]) |
                      (static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8) |
                      (static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16) |
                      (static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24);
    values[i] = std::bit_cast<float>(u);
  }
  return Raster(width, height, std::move(values));
}

void save_fmap(const std::filesystem::path& path, const Raster& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << map.width() << "," << map.height() << "\n";
  std::vector<unsigned char> bytes(map.size() * 4);
  for (std::size_t i = 0; i < map.size(); ++i) {
    auto u = std::bit_cast<std::uint32_t>(static_cast<float>(map[i]));
    bytes[4 * i] = static_cast<unsigned char>(u & 0xff);
    bytes[4 * i + 1] = static_cast<unsigned char>((u >> 8) & 0xff);
    bytes[4 * i + 2] = static_cast<unsigned char>((u >> 16) & 0xff);
    bytes[4 * i + 3] = static_cast<unsigned char>((u >> 24) & 0xff);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

Raster load_map(const std::filesystem::path& path) {
  std::string ext = lower_extension(path);
  if (ext == ".fmap") return load_fmap(path);
  if (ext == ".png") {
    Image img = detail::read_png(path);
    if (img.planes.size() != 1) {
      throw InvalidArgumentError("map PNG must be grayscale: " + path.string());
    }
    return img.planes.front();
  }
  throw InvalidArgumentError("unknown map format '" + ext + "' for " + path.string());
}

void save_map(const std::filesystem::path& path, const Raster& map) {
  std::string ext = lower_extension(path);
  if (ext == ".fmap") {
    save_fmap(path, map);
  } else if (ext == ".png") {
    detail::write_png_gray16(path, map);
  } else {
    throw InvalidArgumentError("unknown map format '" + ext + "' for " + path.string());
  }
}

Image load_image(const std::filesystem::path& path) {
  std::string ext = lower_extension(path);
  if (ext == ".png") return detail::read_png(path);
  if (ext == ".fmap") return Image(load_fmap(path));
  throw InvalidArgumentError("unknown image format '" + ext + "' for " + path.string());
}

void save_image_png8(const std::filesystem::path& path, const Image& image) {
  detail::write_png8(path, image);
}

}  // namespace odisal
