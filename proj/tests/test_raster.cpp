#include <doctest.h>

#include <cmath>
#include <random>

#include "odisal/dataset.hpp"
#include "odisal/raster.hpp"

using namespace odisal;

namespace {

Raster random_raster(int w, int h, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  Raster r(w, h, 0.0);
  for (double& v : r.values()) v = detail::uniform_range(rng, lo, hi);
  return r;
}

// Independent dense-convolution oracle: direct 2D summation with an
// explicitly built 2D kernel, no separability.
Raster dense_blur_oracle(const Raster& src, double sigma, Boundary hb, Boundary vb) {
  int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k1(2 * radius + 1);
  double total = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    k1[t + radius] = std::exp(-0.5 * t * t / (sigma * sigma));
    total += k1[t + radius];
  }
  for (double& v : k1) v /= total;

  auto resolve = [](int i, int n, Boundary b) {
    if (b == Boundary::wrap) return ((i % n) + n) % n;
    if (b == Boundary::clamp) return std::clamp(i, 0, n - 1);
    int p = 2 * n;
    int m = ((i % p) + p) % p;
    return m < n ? m : p - 1 - m;
  };

  Raster out(src.width(), src.height(), 0.0);
  for (int r = 0; r < src.height(); ++r) {
    for (int c = 0; c < src.width(); ++c) {
      double acc = 0.0;
      for (int dr = -radius; dr <= radius; ++dr) {
        for (int dc = -radius; dc <= radius; ++dc) {
          acc += k1[dr + radius] * k1[dc + radius] *
                 src.at(resolve(r + dr, src.height(), vb), resolve(c + dc, src.width(), hb));
        }
      }
      out.at(r, c) = acc;
    }
  }
  return out;
}

double dot(const Raster& a, const Raster& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

TEST_CASE("normalize_sum basic examples") {
  Raster two(2, 1, {2.0, 2.0});
  Raster n = normalize_sum(two);
  CHECK(n[0] == doctest::Approx(0.5));
  CHECK(n[1] == doctest::Approx(0.5));

  Raster three(3, 1, {1.0, 2.0, 1.0});
  Raster n3 = normalize_sum(three);
  CHECK(n3[0] == doctest::Approx(0.25));
  CHECK(n3[1] == doctest::Approx(0.5));
  CHECK(n3[2] == doctest::Approx(0.25));
}

TEST_CASE("normalize_sum is idempotent and validates input") {
  Raster r = random_raster(17, 9, 1);
  Raster once = normalize_sum(r);
  Raster twice = normalize_sum(once);
  CHECK(std::abs(once.sum() - 1.0) < 1e-9);
  for (std::size_t i = 0; i < once.size(); ++i) {
    CHECK(once[i] == doctest::Approx(twice[i]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(normalize_sum(Raster(4, 4, 0.0)), ZeroMassError);
  Raster neg(2, 2, {1.0, -0.5, 0.2, 0.3});
  CHECK_THROWS_AS(normalize_sum(neg), InvalidArgumentError);
}

TEST_CASE("gaussian_blur identity and constant cases") {
  Raster r = random_raster(20, 12, 2);
  Raster same = gaussian_blur(r, {0.0});
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(same[i] == r[i]);

  Raster constant(25, 15, 0.7);
  Raster blurred = gaussian_blur(constant, {3.0});
  for (double v : blurred.values()) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("gaussian_blur matches the dense 2D convolution oracle") {
  // Unit impulse at the center of a 101x101 map, sigma 8.
  Raster impulse(101, 101, 0.0);
  impulse.at(50, 50) = 1.0;
  BlurSpec spec{8.0, Boundary::wrap, Boundary::reflect};
  Raster fast = gaussian_blur(impulse, spec);
  Raster slow = dense_blur_oracle(impulse, 8.0, Boundary::wrap, Boundary::reflect);
  for (std::size_t i = 0; i < fast.size(); ++i) {
    CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-9));
  }
  // Center value is the product of the 1D kernel center weights.
  int radius = 24;
  double total = 0.0;
  for (int t = -radius; t <= radius; ++t) total += std::exp(-0.5 * t * t / 64.0);
  double k0 = 1.0 / total;
  CHECK(fast.at(50, 50) == doctest::Approx(k0 * k0).epsilon(1e-9));

  // A boundary-heavy case as well.
  Raster r = random_raster(13, 9, 3);
  Raster fast2 = gaussian_blur(r, {2.5, Boundary::wrap, Boundary::clamp});
  Raster slow2 = dense_blur_oracle(r, 2.5, Boundary::wrap, Boundary::clamp);
  for (std::size_t i = 0; i < fast2.size(); ++i) {
    CHECK(fast2[i] == doctest::Approx(slow2[i]).epsilon(1e-9));
  }
}

TEST_CASE("gaussian_blur preserves mass with wrap/reflect boundaries") {
  Raster r = random_raster(30, 20, 4, 0.1, 2.0);
  for (double sigma : {1.0, 4.0, 9.0}) {
    Raster b = gaussian_blur(r, {sigma, Boundary::wrap, Boundary::reflect});
    CHECK(b.sum() == doctest::Approx(r.sum()).epsilon(1e-6));
    CHECK(b.all_nonnegative());
  }
}

TEST_CASE("gaussian_blur is linear") {
  Raster p = random_raster(16, 11, 5);
  Raster q = random_raster(16, 11, 6);
  BlurSpec spec{2.0};
  double a = 0.7, b = -1.3;
  Raster combined = gaussian_blur(add_scaled(scale(p, a), q, b), spec);
  Raster separate = add_scaled(scale(gaussian_blur(p, spec), a), gaussian_blur(q, spec), b);
  for (std::size_t i = 0; i < combined.size(); ++i) {
    CHECK(combined[i] == doctest::Approx(separate[i]).epsilon(1e-9));
  }
}

TEST_CASE("gaussian_blur rejects invalid boundary combinations") {
  Raster r(8, 8, 1.0);
  CHECK_THROWS_AS(gaussian_blur(r, {1.0, Boundary::clamp, Boundary::reflect}),
                  InvalidArgumentError);
  CHECK_THROWS_AS(gaussian_blur(r, {1.0, Boundary::wrap, Boundary::wrap}), InvalidArgumentError);
  CHECK_THROWS_AS(gaussian_blur(r, {-1.0}), InvalidArgumentError);
}

TEST_CASE("gaussian_blur_adjoint is the exact adjoint") {
  Raster x = random_raster(14, 10, 7);
  Raster y = random_raster(14, 10, 8);
  for (BlurSpec spec : {BlurSpec{3.0, Boundary::wrap, Boundary::reflect},
                        BlurSpec{2.0, Boundary::reflect, Boundary::clamp}}) {
    double lhs = dot(gaussian_blur(x, spec), y);
    double rhs = dot(x, gaussian_blur_adjoint(y, spec));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("sample_bilinear lattice, midpoint, and wrap rules") {
  Raster r(3, 2, {0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
  CHECK(sample_bilinear(r, 1.0, 0.0, false) == 1.0);
  CHECK(sample_bilinear(r, 2.0, 1.0, false) == 5.0);
  CHECK(sample_bilinear(r, 0.5, 0.0, false) == doctest::Approx(0.5));
  // x = width - 0.5 with wrap: mean of the last and first column values.
  CHECK(sample_bilinear(r, 2.5, 0.0, true) == doctest::Approx((2.0 + 0.0) / 2));
  CHECK(sample_bilinear(r, 2.5, 1.0, true) == doctest::Approx((5.0 + 3.0) / 2));
  // Clamped when wrapping is off.
  CHECK(sample_bilinear(r, 7.0, 0.0, false) == 2.0);
  CHECK(sample_bilinear(r, -3.0, 5.0, false) == 3.0);
}

TEST_CASE("sample_bilinear stays within its four neighbors") {
  Raster r = random_raster(9, 7, 9);
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 500; ++trial) {
    double x = detail::uniform_range(rng, 0.0, 8.0);
    double y = detail::uniform_range(rng, 0.0, 6.0);
    int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
    int x1 = std::min(x0 + 1, 8), y1 = std::min(y0 + 1, 6);
    double lo = std::min({r.at(y0, x0), r.at(y0, x1), r.at(y1, x0), r.at(y1, x1)});
    double hi = std::max({r.at(y0, x0), r.at(y0, x1), r.at(y1, x0), r.at(y1, x1)});
    double v = sample_bilinear(r, x, y, false);
    CHECK(v >= lo - 1e-12);
    CHECK(v <= hi + 1e-12);
  }
}

TEST_CASE("resize_bilinear round trip and adjoint") {
  Raster r = random_raster(6, 5, 11);
  Raster same = resize_bilinear(r, 6, 5);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(same[i] == doctest::Approx(r[i]));

  Raster up = resize_bilinear(r, 24, 20);
  CHECK(up.min() >= r.min() - 1e-12);
  CHECK(up.max() <= r.max() + 1e-12);

  Raster x = random_raster(6, 5, 12);
  Raster g = random_raster(24, 20, 13);
  double lhs = dot(resize_bilinear(x, 24, 20), g);
  double rhs = dot(x, resize_bilinear_adjoint(g, 6, 5));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("raster validation") {
  CHECK_THROWS_AS(Raster(0, 3), InvalidArgumentError);
  CHECK_THROWS_AS(Raster(2, 2, std::vector<double>{1.0}), InvalidArgumentError);
  CHECK_THROWS_AS(multiply(Raster(2, 2, 1.0), Raster(3, 2, 1.0)), ShapeMismatchError);
}

TEST_CASE("image luma weights") {
  Raster r(2, 2, 1.0), g(2, 2, 0.5), b(2, 2, 0.25);
  Image img(r, g, b);
  Raster y = img.luma();
  CHECK(y[0] == doctest::Approx(0.299 * 1.0 + 0.587 * 0.5 + 0.114 * 0.25));
  CHECK(Image(r).luma()[0] == 1.0);
}
