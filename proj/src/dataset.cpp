#include "odisal/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "odisal/geometry.hpp"

namespace odisal {

namespace {

std::string loc(const std::filesystem::path& path, int line) {
  return path.string() + ":" + std::to_string(line);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  std::string t;
  while (in >> t) tokens.push_back(t);
  return tokens;
}

double wrap_theta_deg(double deg) {
  double t = std::fmod(deg + 180.0, 360.0);
  if (t < 0.0) t += 360.0;
  return t - 180.0;
}

}  // namespace

const DatasetEntry* DatasetManifest::find(const std::string& id) const {
  for (const DatasetEntry& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

PixelCoord fixation_pixel(double theta, double phi, int width, int height) {
  PixelPos pos = equirect_spherical_to_pixel({theta, phi}, width, height);
  int col = static_cast<int>(std::lround(pos.col));
  int row = static_cast<int>(std::lround(pos.row));
  col = ((col % width) + width) % width;
  row = std::clamp(row, 0, height - 1);
  return {row, col};
}

std::vector<PixelCoord> fixations_to_pixels(const FixationSet& fix, int width, int height) {
  std::vector<PixelCoord> out;
  out.reserve(fix.fixations.size());
  for (const Fixation& f : fix.fixations) {
    out.push_back(fixation_pixel(f.theta, f.phi, width, height));
  }
  return out;
}

Raster make_gt_map(const FixationSet& fix, int width, int height, double sigma) {
  if (fix.fixations.empty()) {
    throw NoFixationsError("make_gt_map: fixation set '" + fix.image_id + "' is empty");
  }
  Raster accum(width, height, 0.0);
  for (const Fixation& f : fix.fixations) {
    PixelCoord p = fixation_pixel(f.theta, f.phi, width, height);
    accum.at(p.row, p.col) += 1.0;
  }
  return normalize_sum(gaussian_blur(accum, {sigma, Boundary::wrap, Boundary::reflect}));
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::filesystem::path base = path.parent_path();

  DatasetManifest manifest;
  std::vector<std::string>* section = nullptr;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line == "[train]") {
      section = &manifest.train_ids;
      continue;
    }
    if (line == "[val]") {
      section = &manifest.val_ids;
      continue;
    }
    std::vector<std::string> tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (section) {
      for (const std::string& id : tokens) {
        if (!manifest.find(id)) {
          throw ParseError(loc(path, line_no) + ": split references unknown id '" + id + "'");
        }
        section->push_back(id);
      }
      continue;
    }
    if (tokens.size() < 3 || tokens.size() > 4) {
      throw ParseError(loc(path, line_no) +
                       ": expected '<id> <image> <fixations> [gt]', got " + line);
    }
    if (manifest.find(tokens[0])) {
      throw ParseError(loc(path, line_no) + ": duplicate image_id '" + tokens[0] + "'");
    }
    DatasetEntry entry;
    entry.id = tokens[0];
    entry.image_path = base / tokens[1];
    entry.fixation_path = base / tokens[2];
    if (tokens.size() == 4) entry.gt_path = base / tokens[3];
    manifest.entries.push_back(std::move(entry));
  }
  for (const std::string& id : manifest.train_ids) {
    if (std::find(manifest.val_ids.begin(), manifest.val_ids.end(), id) !=
        manifest.val_ids.end()) {
      throw ParseError(path.string() + ": id '" + id + "' appears in both train and val");
    }
  }
  return manifest;
}

void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest " + path.string());
  std::filesystem::path base = path.parent_path();
  auto rel = [&](const std::filesystem::path& p) {
    std::error_code ec;
    std::filesystem::path r = std::filesystem::relative(p, base, ec);
    return (ec || r.empty()) ? p.string() : r.string();
  };
  for (const DatasetEntry& e : manifest.entries) {
    out << e.id << " " << rel(e.image_path) << " " << rel(e.fixation_path);
    if (e.gt_path) out << " " << rel(*e.gt_path);
    out << "\n";
  }
  if (!manifest.train_ids.empty()) {
    out << "[train]\n";
    for (const std::string& id : manifest.train_ids) out << id << "\n";
  }
  if (!manifest.val_ids.empty()) {
    out << "[val]\n";
    for (const std::string& id : manifest.val_ids) out << id << "\n";
  }
  if (!out) throw IoError("failed writing manifest " + path.string());
}

FixationSet load_fixations(const std::filesystem::path& path, const std::string& image_id) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open fixations " + path.string());
  FixationSet set;
  set.image_id = image_id;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError(loc(path, 1) + ": empty fixation file");
  ++line_no;
  if (line.rfind("observer_id", 0) != 0) {
    throw ParseError(loc(path, 1) + ": expected header 'observer_id,theta_deg,phi_deg'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string obs, theta_s, phi_s;
    if (!std::getline(ls, obs, ',') || !std::getline(ls, theta_s, ',') ||
        !std::getline(ls, phi_s)) {
      throw ParseError(loc(path, line_no) + ": expected 'observer_id,theta_deg,phi_deg'");
    }
    double theta_deg = 0.0, phi_deg = 0.0;
    try {
      theta_deg = std::stod(theta_s);
      phi_deg = std::stod(phi_s);
    } catch (const std::exception&) {
      throw ParseError(loc(path, line_no) + ": non-numeric coordinate");
    }
    if (phi_deg < -90.0 || phi_deg > 90.0) {
      throw RangeError(loc(path, line_no) + ": latitude " + std::to_string(phi_deg) +
                       " deg outside [-90, 90]");
    }
    if (theta_deg < -360.0 || theta_deg > 360.0) {
      throw RangeError(loc(path, line_no) + ": longitude " + std::to_string(theta_deg) +
                       " deg outside [-360, 360]");
    }
    set.fixations.push_back(
        {obs, deg_to_rad(wrap_theta_deg(theta_deg)), deg_to_rad(phi_deg)});
  }
  if (set.fixations.empty()) throw NoFixationsError(path.string() + ": no fixations");
  return set;
}

void save_fixations(const std::filesystem::path& path, const FixationSet& fix) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write fixations " + path.string());
  out << "observer_id,theta_deg,phi_deg\n";
  char buf[128];
  for (const Fixation& f : fix.fixations) {
    std::snprintf(buf, sizeof(buf), "%s,%.10f,%.10f\n", f.observer_id.c_str(),
                  rad_to_deg(f.theta), rad_to_deg(f.phi));
    out << buf;
  }
  if (!out) throw IoError("failed writing fixations " + path.string());
}

Raster load_or_make_gt(const DatasetEntry& entry, int width, int height, double sigma) {
  if (entry.gt_path) {
    Raster gt = load_map(*entry.gt_path);
    if (gt.width() != width || gt.height() != height) {
      gt = resize_bilinear(gt, width, height);
    }
    return normalize_sum(gt);
  }
  return make_gt_map(load_fixations(entry.fixation_path, entry.id), width, height, sigma);
}

void make_split(DatasetManifest& manifest, int train_count, std::uint64_t seed) {
  int n = static_cast<int>(manifest.entries.size());
  if (n == 0) throw EmptyInputError("make_split: empty manifest");
  if (train_count < 0) train_count = static_cast<int>(std::lround(0.8 * n));
  if (train_count > n) {
    throw InvalidArgumentError("make_split: train_count exceeds entry count");
  }
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const DatasetEntry& e : manifest.entries) ids.push_back(e.id);

  std::mt19937_64 rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) {
    std::size_t j = detail::uniform_index(rng, i);
    std::swap(ids[i - 1], ids[j]);
  }
  manifest.train_ids.assign(ids.begin(), ids.begin() + train_count);
  manifest.val_ids.assign(ids.begin() + train_count, ids.end());
}

double default_gt_sigma(int height) { return 24.0 * height / 800.0; }

SyntheticDataset generate_synthetic(const SyntheticSpec& spec,
                                    const std::filesystem::path& out_dir) {
  if (spec.n_images < 1) throw InvalidArgumentError("generate_synthetic: n_images must be >= 1");
  if (spec.width < 2 || spec.height < 2) {
    throw InvalidArgumentError("generate_synthetic: image size too small");
  }
  if (spec.n_fixations < 1) {
    throw InvalidArgumentError("generate_synthetic: n_fixations must be >= 1");
  }
  std::filesystem::create_directories(out_dir);

  int w = spec.width;
  int h = spec.height;
  double gt_sigma = spec.gt_sigma >= 0.0 ? spec.gt_sigma : default_gt_sigma(h);

  SyntheticDataset out;
  out.latitude_profile.resize(h);
  std::vector<double> prior_row(h);
  for (int r = 0; r < h; ++r) {
    double phi = equirect_pixel_to_spherical(0, r, w, h).phi;
    prior_row[r] = std::exp(-phi * phi / (2.0 * spec.prior_sigma_phi * spec.prior_sigma_phi));
    out.latitude_profile[r] = prior_row[r];
  }

  std::mt19937_64 rng(spec.seed);
  double min_dim = static_cast<double>(std::min(w, h));
  double sigma_lo = min_dim / 16.0;
  double sigma_hi = min_dim / 6.0;
  double margin = 3.0 * sigma_hi;

  std::vector<double> density(static_cast<std::size_t>(w) * h);
  std::vector<double> cdf(density.size());

  for (int k = 0; k < spec.n_images; ++k) {
    Raster image(w, h, spec.n_blobs == 0 ? 1.0 : 0.0);
    for (int b = 0; b < spec.n_blobs; ++b) {
      double cx = detail::uniform_range(rng, 0.0, static_cast<double>(w));
      double cy = detail::uniform_range(rng, -margin, h - 1 + margin);
      double bs = detail::uniform_range(rng, sigma_lo, sigma_hi);
      double amp = detail::uniform_range(rng, 0.5, 1.5);
      for (int r = 0; r < h; ++r) {
        double dy = r - cy;
        for (int c = 0; c < w; ++c) {
          double dx = std::abs(c - cx);
          dx = std::min(dx, w - dx);  // longitude is periodic
          image.at(r, c) += amp * std::exp(-(dx * dx + dy * dy) / (2.0 * bs * bs));
        }
      }
    }

    // Fixation density = blob saliency times the latitude prior.
    double total = 0.0;
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        std::size_t i = image.index(r, c);
        density[i] = image.at(r, c) * prior_row[r];
        total += density[i];
        cdf[i] = total;
      }
    }

    char name[32];
    std::snprintf(name, sizeof(name), "img_%03d", k);
    FixationSet fix;
    fix.image_id = name;
    for (int f = 0; f < spec.n_fixations; ++f) {
      double u = detail::uniform_unit(rng) * total;
      std::size_t i =
          std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
      if (i >= cdf.size()) i = cdf.size() - 1;
      int row = static_cast<int>(i) / w;
      int col = static_cast<int>(i) % w;
      SphericalCoord sc = equirect_pixel_to_spherical(col, row, w, h);
      fix.fixations.push_back({"o" + std::to_string(f % 17), sc.theta, sc.phi});
    }

    Raster gt = make_gt_map(fix, w, h, gt_sigma);

    std::string img_file = std::string(name) + ".fmap";
    std::string fix_file = std::string(name) + "_fix.csv";
    std::string gt_file = std::string(name) + "_gt.fmap";
    save_map(out_dir / img_file, image);
    save_fixations(out_dir / fix_file, fix);
    save_map(out_dir / gt_file, gt);

    DatasetEntry entry;
    entry.id = name;
    entry.image_path = out_dir / img_file;
    entry.fixation_path = out_dir / fix_file;
    entry.gt_path = out_dir / gt_file;
    out.manifest.entries.push_back(std::move(entry));
  }

  make_split(out.manifest, -1, spec.seed);

  {
    std::ofstream prior_file(out_dir / "true_prior.csv");
    prior_file << "row,phi_rad,weight\n";
    char buf[96];
    for (int r = 0; r < h; ++r) {
      double phi = equirect_pixel_to_spherical(0, r, w, h).phi;
      std::snprintf(buf, sizeof(buf), "%d,%.10f,%.10f\n", r, phi, out.latitude_profile[r]);
      prior_file << buf;
    }
  }

  out.manifest_path = out_dir / "manifest.txt";
  save_manifest(out.manifest_path, out.manifest);
  return out;
}

}  // namespace odisal
