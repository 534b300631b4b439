#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "odisal/dataset.hpp"
#include "odisal/geometry.hpp"
#include "test_util.hpp"

using namespace odisal;
using odisal_test::TempDir;

namespace {

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Chi-squared critical value at alpha = 0.01 (Wilson-Hilferty).
double chi2_critical_99(int dof) {
  double k = dof;
  double z = 2.3263478740;
  double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * t * t * t;
}

}  // namespace

TEST_CASE("make_gt_map delta and duplicate-fixation cases") {
  FixationSet one;
  one.image_id = "x";
  SphericalCoord c = equirect_pixel_to_spherical(10, 5, 32, 16);
  one.fixations.push_back({"o1", c.theta, c.phi});

  Raster delta = make_gt_map(one, 32, 16, 0.0);
  CHECK(delta.at(5, 10) == 1.0);
  CHECK(delta.sum() == doctest::Approx(1.0));

  FixationSet two = one;
  two.fixations.push_back({"o2", c.theta, c.phi});
  Raster dup = make_gt_map(two, 32, 16, 0.0);
  for (std::size_t i = 0; i < delta.size(); ++i) CHECK(dup[i] == delta[i]);

  CHECK_THROWS_AS(make_gt_map(FixationSet{"empty", {}}, 32, 16, 1.0), NoFixationsError);
}

TEST_CASE("make_gt_map wraps mass across the longitude seam") {
  // Fixation on the last column; blur mass must appear on both edges.
  FixationSet fix;
  fix.image_id = "seam";
  SphericalCoord c = equirect_pixel_to_spherical(63, 8, 64, 32);
  fix.fixations.push_back({"o", c.theta, c.phi});
  Raster gt = make_gt_map(fix, 64, 32, 3.0);
  CHECK(gt.sum() == doctest::Approx(1.0).epsilon(1e-9));

  double left_mass = 0.0, right_mass = 0.0;
  for (int r = 0; r < 32; ++r) {
    for (int col = 0; col < 4; ++col) left_mass += gt.at(r, col);
    for (int col = 60; col < 64; ++col) right_mass += gt.at(r, col);
  }
  CHECK(left_mass > 0.05);
  CHECK(right_mass > 0.05);

  // Dense oracle with explicit wrapped horizontal distance and reflected
  // vertical distance, evaluated from the fixation pixel.
  int radius = 9;  // 3 sigma
  double total = 0.0;
  Raster oracle(64, 32, 0.0);
  auto k1 = [&](int t) { return std::exp(-0.5 * t * t / 9.0); };
  double norm1d = 0.0;
  for (int t = -radius; t <= radius; ++t) norm1d += k1(t);
  for (int dr = -radius; dr <= radius; ++dr) {
    int rr = 8 + dr;
    rr = rr < 0 ? -1 - rr : (rr >= 32 ? 63 - rr : rr);
    for (int dc = -radius; dc <= radius; ++dc) {
      int cc = ((63 + dc) % 64 + 64) % 64;
      oracle.at(rr, cc) += k1(dr) * k1(dc) / (norm1d * norm1d);
      total += k1(dr) * k1(dc) / (norm1d * norm1d);
    }
  }
  for (double& v : oracle.values()) v /= total;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    CHECK(gt[i] == doctest::Approx(oracle[i]).epsilon(1e-9));
  }
}

TEST_CASE("fixation CSV round trip and validation") {
  TempDir dir("fixcsv");
  FixationSet fix;
  fix.image_id = "img";
  fix.fixations = {{"obs1", 0.5, -0.25}, {"obs2", -2.0, 1.2}};
  save_fixations(dir.path() / "f.csv", fix);
  FixationSet loaded = load_fixations(dir.path() / "f.csv", "img");
  REQUIRE(loaded.fixations.size() == 2);
  CHECK(loaded.fixations[0].observer_id == "obs1");
  CHECK(loaded.fixations[0].theta == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(loaded.fixations[1].phi == doctest::Approx(1.2).epsilon(1e-9));

  // Latitude of 2.0 rad (114.59 deg) is out of range; the error names line 3.
  {
    std::ofstream bad(dir.path() / "bad.csv");
    bad << "observer_id,theta_deg,phi_deg\n";
    bad << "o1,10.0,20.0\n";
    bad << "o1,10.0,114.59155903\n";
  }
  try {
    load_fixations(dir.path() / "bad.csv", "img");
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }

  {
    std::ofstream noheader(dir.path() / "nh.csv");
    noheader << "o1,10.0,20.0\n";
  }
  CHECK_THROWS_AS(load_fixations(dir.path() / "nh.csv", "img"), ParseError);
}

TEST_CASE("manifest parsing, duplicates, and splits") {
  TempDir dir("manifest");
  {
    std::ofstream m(dir.path() / "m.txt");
    m << "# comment\n";
    m << "a a.png a.csv a_gt.fmap\n";
    m << "b b.png b.csv\n";
    m << "[train]\na\n[val]\nb\n";
  }
  DatasetManifest manifest = load_manifest(dir.path() / "m.txt");
  REQUIRE(manifest.entries.size() == 2);
  CHECK(manifest.entries[0].gt_path.has_value());
  CHECK_FALSE(manifest.entries[1].gt_path.has_value());
  CHECK(manifest.entries[0].image_path == dir.path() / "a.png");
  CHECK(manifest.train_ids == std::vector<std::string>{"a"});
  CHECK(manifest.val_ids == std::vector<std::string>{"b"});

  {
    std::ofstream m(dir.path() / "dup.txt");
    m << "a a.png a.csv\n";
    m << "a a.png a.csv\n";
  }
  CHECK_THROWS_AS(load_manifest(dir.path() / "dup.txt"), ParseError);

  {
    std::ofstream m(dir.path() / "unknown.txt");
    m << "a a.png a.csv\n[train]\nzz\n";
  }
  CHECK_THROWS_AS(load_manifest(dir.path() / "unknown.txt"), ParseError);

  {
    std::ofstream m(dir.path() / "overlap.txt");
    m << "a a.png a.csv\n[train]\na\n[val]\na\n";
  }
  CHECK_THROWS_AS(load_manifest(dir.path() / "overlap.txt"), ParseError);
}

TEST_CASE("default split of 40 entries is 32/8 and deterministic") {
  DatasetManifest manifest;
  for (int i = 0; i < 40; ++i) {
    manifest.entries.push_back({"img" + std::to_string(i), "x.png", "x.csv", {}});
  }
  make_split(manifest, -1, 99);
  CHECK(manifest.train_ids.size() == 32);
  CHECK(manifest.val_ids.size() == 8);

  DatasetManifest again = manifest;
  again.train_ids.clear();
  again.val_ids.clear();
  make_split(again, -1, 99);
  CHECK(again.train_ids == manifest.train_ids);
  CHECK(again.val_ids == manifest.val_ids);

  for (const std::string& id : manifest.train_ids) {
    CHECK(std::find(manifest.val_ids.begin(), manifest.val_ids.end(), id) ==
          manifest.val_ids.end());
  }
}

TEST_CASE("fmap round trip is lossless at float32 precision") {
  TempDir dir("fmap");
  Raster r(5, 3, 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = static_cast<double>(static_cast<float>(0.137 * (i + 1)));  // f32-exact values
  }
  save_map(dir.path() / "r.fmap", r);
  Raster back = load_map(dir.path() / "r.fmap");
  REQUIRE(back.width() == 5);
  REQUIRE(back.height() == 3);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(back[i] == r[i]);

  // Saving twice produces identical bytes.
  save_map(dir.path() / "r2.fmap", r);
  CHECK(read_bytes(dir.path() / "r.fmap") == read_bytes(dir.path() / "r2.fmap"));
}

TEST_CASE("16-bit PNG round trip quantization error is bounded") {
  TempDir dir("png16");
  Raster r(9, 7, 0.0);
  std::mt19937_64 rng(3);
  for (double& v : r.values()) v = detail::uniform_unit(rng);
  save_map(dir.path() / "r.png", r);
  Raster back = load_map(dir.path() / "r.png");
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(std::abs(back[i] - r[i]) <= 1.0 / 65535.0);
  }
}

TEST_CASE("8-bit PNG image round trip") {
  TempDir dir("png8");
  Raster red(6, 4, 0.8), green(6, 4, 0.4), blue(6, 4, 0.1);
  save_image_png8(dir.path() / "rgb.png", Image(red, green, blue));
  Image back = load_image(dir.path() / "rgb.png");
  REQUIRE(back.planes.size() == 3);
  CHECK(std::abs(back.planes[0][0] - 0.8) <= 1.0 / 255.0);
  CHECK(std::abs(back.planes[1][0] - 0.4) <= 1.0 / 255.0);
  CHECK(std::abs(back.planes[2][0] - 0.1) <= 1.0 / 255.0);

  // Grayscale maps must stay grayscale for load_map.
  CHECK_THROWS_AS(load_map(dir.path() / "rgb.png"), InvalidArgumentError);
}

TEST_CASE("synthetic generation is bitwise deterministic per seed") {
  TempDir dir("synth");
  SyntheticSpec spec;
  spec.n_images = 2;
  spec.width = 48;
  spec.height = 24;
  spec.n_fixations = 60;
  spec.seed = 11;
  SyntheticDataset a = generate_synthetic(spec, dir.path() / "a");
  SyntheticDataset b = generate_synthetic(spec, dir.path() / "b");
  for (const char* name : {"img_000.fmap", "img_000_fix.csv", "img_000_gt.fmap",
                           "img_001.fmap", "manifest.txt", "true_prior.csv"}) {
    CHECK(read_bytes(dir.path() / "a" / name) == read_bytes(dir.path() / "b" / name));
  }

  spec.seed = 12;
  SyntheticDataset c = generate_synthetic(spec, dir.path() / "c");
  CHECK(read_bytes(dir.path() / "a" / "img_000.fmap") !=
        read_bytes(dir.path() / "c" / "img_000.fmap"));

  // 80/20 split applied by default.
  CHECK(a.manifest.train_ids.size() + a.manifest.val_ids.size() == 2);
}

TEST_CASE("flat prior yields row-uniform fixations (chi-squared)") {
  TempDir dir("chi2");
  SyntheticSpec spec;
  spec.n_images = 1;
  spec.width = 128;
  spec.height = 64;
  spec.n_blobs = 0;          // featureless image: density is the prior alone
  spec.prior_sigma_phi = 1e9;  // effectively no latitude preference
  spec.n_fixations = 100000;
  spec.seed = 5;
  spec.gt_sigma = 1.0;
  SyntheticDataset data = generate_synthetic(spec, dir.path());

  FixationSet fix = load_fixations(data.manifest.entries[0].fixation_path, "img_000");
  std::vector<int> row_counts(spec.height, 0);
  for (const Fixation& f : fix.fixations) {
    PixelCoord p = fixation_pixel(f.theta, f.phi, spec.width, spec.height);
    ++row_counts[p.row];
  }
  double expected = static_cast<double>(spec.n_fixations) / spec.height;
  double chi2 = 0.0;
  for (int count : row_counts) {
    double d = count - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < chi2_critical_99(spec.height - 1));
}

TEST_CASE("narrow prior concentrates fixations near the equator") {
  TempDir dir("narrow");
  SyntheticSpec spec;
  spec.n_images = 1;
  spec.width = 128;
  spec.height = 64;
  spec.n_blobs = 0;
  spec.prior_sigma_phi = 0.2;
  spec.n_fixations = 20000;
  spec.seed = 6;
  spec.gt_sigma = 1.0;
  SyntheticDataset data = generate_synthetic(spec, dir.path());

  FixationSet fix = load_fixations(data.manifest.entries[0].fixation_path, "img_000");
  int inside = 0;
  for (const Fixation& f : fix.fixations) {
    if (std::abs(f.phi) < 0.6) ++inside;
  }
  CHECK(static_cast<double>(inside) / fix.fixations.size() > 0.9);
}

TEST_CASE("load_or_make_gt prefers stored maps") {
  TempDir dir("gtload");
  Raster gt = normalize_sum(Raster(16, 8, 1.0));
  save_map(dir.path() / "gt.fmap", gt);
  FixationSet fix;
  fix.image_id = "e";
  fix.fixations = {{"o", 0.0, 0.0}};
  save_fixations(dir.path() / "f.csv", fix);

  DatasetEntry with_gt{"e", dir.path() / "img.png", dir.path() / "f.csv",
                       dir.path() / "gt.fmap"};
  Raster loaded = load_or_make_gt(with_gt, 16, 8, 2.0);
  CHECK(loaded.sum() == doctest::Approx(1.0).epsilon(1e-9));

  DatasetEntry no_gt{"e", dir.path() / "img.png", dir.path() / "f.csv", {}};
  Raster made = load_or_make_gt(no_gt, 16, 8, 2.0);
  CHECK(made.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(made.at(4, 8) > made.at(0, 0));  // mass near the fixation
}
