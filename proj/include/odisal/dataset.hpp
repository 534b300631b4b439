#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "odisal/io.hpp"
#include "odisal/raster.hpp"

namespace odisal {

/// One recorded gaze point, in spherical coordinates (radians).
struct Fixation {
  std::string observer_id;
  double theta = 0.0;
  double phi = 0.0;
};

struct FixationSet {
  std::string image_id;
  std::vector<Fixation> fixations;
};

struct DatasetEntry {
  std::string id;
  std::filesystem::path image_path;
  std::filesystem::path fixation_path;
  std::optional<std::filesystem::path> gt_path;
};

/// Dataset index: entries plus disjoint train/val id lists.
struct DatasetManifest {
  std::vector<DatasetEntry> entries;
  std::vector<std::string> train_ids;
  std::vector<std::string> val_ids;

  const DatasetEntry* find(const std::string& id) const;
};

/// Nearest equirectangular pixel of a spherical coordinate (wrapping the
/// column, clamping the row).
PixelCoord fixation_pixel(double theta, double phi, int width, int height);

std::vector<PixelCoord> fixations_to_pixels(const FixationSet& fix, int width, int height);

/// Accumulates one unit per fixation at its nearest pixel, blurs with
/// (sigma, wrap, reflect), and normalizes to sum 1.
Raster make_gt_map(const FixationSet& fix, int width, int height, double sigma);

/// Manifest format, one entry per line:
///   <image_id> <image_path> <fixation_path> [gt_path]
/// followed by optional `[train]` / `[val]` sections listing ids. Paths are
/// resolved relative to the manifest location.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Writes the manifest with paths relative to its directory when possible.
void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// CSV with header `observer_id,theta_deg,phi_deg`. Rows with latitude
/// outside [-90, 90] raise RangeError naming the line; longitudes are
/// wrapped into [-180, 180).
FixationSet load_fixations(const std::filesystem::path& path, const std::string& image_id);

void save_fixations(const std::filesystem::path& path, const FixationSet& fix);

/// Loads the entry's ground-truth map if present, else builds one from its
/// fixations at the given shape and blur.
Raster load_or_make_gt(const DatasetEntry& entry, int width, int height, double sigma);

/// Deterministic seeded shuffle split; train_count < 0 selects the default
/// 80% train share (a 40-image manifest splits 32/8).
void make_split(DatasetManifest& manifest, int train_count, std::uint64_t seed);

/// Default ground-truth blur at a given equirectangular height (24 px at
/// height 800, scaled linearly).
double default_gt_sigma(int height);

struct SyntheticSpec {
  int n_images = 16;
  int width = 128;
  int height = 64;
  double prior_sigma_phi = 0.3;  // radians; very large means no latitude preference
  int n_blobs = 6;               // 0 = featureless images
  int n_fixations = 300;         // per image
  std::uint64_t seed = 0;
  double gt_sigma = -1.0;  // < 0 selects default_gt_sigma(height)
};

struct SyntheticDataset {
  DatasetManifest manifest;
  std::filesystem::path manifest_path;
  std::vector<double> latitude_profile;  // generating prior per row
};

/// Writes a seeded synthetic dataset (blob images, fixations drawn from
/// blob saliency times a latitude prior, ground-truth maps) under out_dir
/// and records the generating prior for oracle comparisons. The same seed
/// reproduces identical files byte for byte.
SyntheticDataset generate_synthetic(const SyntheticSpec& spec,
                                    const std::filesystem::path& out_dir);

namespace detail {

/// Uniform double in [0, 1) from the standardized mt19937_64 stream;
/// avoids std::uniform_real_distribution, whose output is
/// implementation-defined.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

/// Uniform index in [0, n) (Lemire reduction; deterministic).
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(n)) >> 64);
}

}  // namespace detail

}  // namespace odisal
