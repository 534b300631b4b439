#include "odisal/backend.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "odisal/io.hpp"

namespace odisal {

namespace {

// Quantized lookup key; grid directions are exact multiples of the interval,
// so micro-degree rounding is collision-free.
std::string view_key(const std::string& image_id, double theta_c_deg, double phi_c_deg) {
  return image_id + "|" + std::to_string(std::llround(theta_c_deg * 1e6)) + "|" +
         std::to_string(std::llround(phi_c_deg * 1e6));
}

}  // namespace

CenterBiasLayer::CenterBiasLayer(Raster w) : weights(std::move(w)) {
  if (!weights.all_nonnegative() || !weights.all_finite()) {
    throw InvalidArgumentError("center-bias weights must be finite and >= 0");
  }
}

Raster SaliencyBackend::predict(const Image& image, bool apply_center_bias,
                                const ViewContext& ctx) const {
  if (image.width() < 32 || image.height() < 32) {
    throw InvalidArgumentError("backend input must be at least 32x32, got " +
                               std::to_string(image.width()) + "x" +
                               std::to_string(image.height()));
  }
  if (!apply_center_bias && !supports_without_bias()) {
    throw UnsupportedModeError(name() + " backend cannot produce unbiased output");
  }
  Raster out = predict_raw(image, ctx);
  if (apply_center_bias) {
    if (!center_bias_) {
      throw UnsupportedModeError(name() + " backend has no center-bias layer");
    }
    if (!center_bias_->weights.same_shape(out)) {
      throw BiasShapeMismatchError("center-bias weights are " +
                                   std::to_string(center_bias_->weights.width()) + "x" +
                                   std::to_string(center_bias_->weights.height()) +
                                   " but prediction is " + std::to_string(out.width()) + "x" +
                                   std::to_string(out.height()));
    }
    out = multiply(out, center_bias_->weights);
  }
  return out;
}

Raster SaliencyBackend::predict(const Raster& gray, bool apply_center_bias,
                                const ViewContext& ctx) const {
  return predict(Image(gray), apply_center_bias, ctx);
}

Raster ConstantBackend::predict_raw(const Image& image, const ViewContext&) const {
  return Raster(image.width(), image.height(), 1.0);
}

FileBackend::FileBackend(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open backend manifest " + manifest_path.string());
  std::filesystem::path base = manifest_path.parent_path();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string image_id, rel_path;
    double theta_deg = 0.0, phi_deg = 0.0;
    if (!(ls >> image_id >> theta_deg >> phi_deg >> rel_path)) {
      throw ParseError(manifest_path.string() + ":" + std::to_string(line_no) +
                       ": expected '<image_id> <theta_c_deg> <phi_c_deg> <path>'");
    }
    std::string key = view_key(image_id, theta_deg, phi_deg);
    if (maps_.count(key)) {
      throw ParseError(manifest_path.string() + ":" + std::to_string(line_no) +
                       ": duplicate entry for " + image_id);
    }
    Raster map = load_map(base / rel_path);
    if (!map.all_nonnegative() || !map.all_finite()) {
      throw ParseError(manifest_path.string() + ":" + std::to_string(line_no) + ": map " +
                       rel_path + " has negative or non-finite values");
    }
    maps_.emplace(std::move(key), std::move(map));
  }
}

Raster FileBackend::predict_raw(const Image&, const ViewContext& ctx) const {
  auto it = maps_.find(view_key(ctx.source_id, ctx.theta_c_deg, ctx.phi_c_deg));
  if (it == maps_.end()) {
    std::ostringstream msg;
    msg << "file backend has no map for image '" << ctx.source_id << "' at (" << ctx.theta_c_deg
        << ", " << ctx.phi_c_deg << ") deg";
    throw NotFoundError(msg.str());
  }
  return it->second;
}

}  // namespace odisal
