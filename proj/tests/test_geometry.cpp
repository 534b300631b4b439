#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "odisal/dataset.hpp"
#include "odisal/geometry.hpp"

using namespace odisal;

namespace {

constexpr double kFov100 = 100.0 * kPi / 180.0;

bool close3(const Direction3& a, double x, double y, double z, double tol = 1e-12) {
  return std::abs(a.x - x) < tol && std::abs(a.y - y) < tol && std::abs(a.z - z) < tol;
}

// Chord length, which equals the angle to first order and keeps full
// precision for tiny separations (acos of the dot product does not).
double angle_between(const Direction3& a, const Direction3& b) {
  double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

TEST_CASE("view_frame axes by direct substitution") {
  ViewFrame f0 = view_frame(0.0, 0.0, kFov100);
  CHECK(close3(f0.x_axis, 0.0, -1.0, 0.0));
  CHECK(close3(f0.y_axis, 0.0, 0.0, 1.0));

  ViewFrame f1 = view_frame(kPi / 2, 0.0, kFov100);
  CHECK(close3(f1.x_axis, -1.0, 0.0, 0.0));
  CHECK(close3(f1.y_axis, 0.0, 0.0, 1.0));

  ViewFrame f2 = view_frame(0.0, kPi / 2, kFov100);
  CHECK(close3(f2.x_axis, 0.0, -1.0, 0.0));
  CHECK(close3(f2.y_axis, -1.0, 0.0, 0.0));

  CHECK_THROWS_AS(view_frame(0.0, 0.0, 0.0), InvalidFovError);
  CHECK_THROWS_AS(view_frame(0.0, 0.0, kPi), InvalidFovError);
  CHECK_THROWS_AS(view_frame(0.0, 1.8, kFov100), InvalidArgumentError);
}

TEST_CASE("spherical_to_direction matches the view basis") {
  CHECK(close3(spherical_to_direction({0.0, 0.0}), -1.0, 0.0, 0.0));
  CHECK(close3(spherical_to_direction({0.0, kPi / 2}), 0.0, 0.0, -1.0));

  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    double theta = detail::uniform_range(rng, -kPi, kPi);
    double phi = detail::uniform_range(rng, -kPi / 2, kPi / 2);
    Direction3 d = spherical_to_direction({theta, phi});
    ViewFrame f = view_frame(theta, phi, kFov100);
    CHECK(std::abs(d.dot(f.x_axis)) < 1e-12);
    CHECK(std::abs(d.dot(f.y_axis)) < 1e-12);
    CHECK(std::abs(d.x - f.z_axis.x) < 1e-12);
    CHECK(std::abs(d.y - f.z_axis.y) < 1e-12);
    CHECK(std::abs(d.z - f.z_axis.z) < 1e-12);
    CHECK(std::abs(d.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("direction_to_spherical inverts exactly") {
  SphericalCoord c = direction_to_spherical({-1.0, 0.0, 0.0});
  CHECK(c.theta == doctest::Approx(0.0));
  CHECK(c.phi == doctest::Approx(0.0));

  SphericalCoord east = direction_to_spherical({0.0, 1.0, 0.0});
  CHECK(east.theta == doctest::Approx(kPi / 2));
  CHECK(east.phi == doctest::Approx(0.0));

  // Poles normalize theta to 0.
  CHECK(direction_to_spherical({0.0, 0.0, -1.0}).theta == 0.0);
  CHECK(direction_to_spherical({0.0, 0.0, 1.0}).theta == 0.0);

  std::mt19937_64 rng(22);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double theta = detail::uniform_range(rng, -kPi, kPi);
    double phi = detail::uniform_range(rng, -kPi / 2, kPi / 2);
    Direction3 d = spherical_to_direction({theta, phi});
    SphericalCoord back = direction_to_spherical(d);
    worst = std::max(worst, angle_between(d, spherical_to_direction(back)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("equirectangular pixel mapping") {
  // Latitude is symmetric about the equator at 800 rows.
  CHECK(equirect_pixel_to_spherical(0, 399.5, 1600, 800).phi == doctest::Approx(0.0));
  CHECK(equirect_pixel_to_spherical(0, 399, 1600, 800).phi ==
        doctest::Approx(-equirect_pixel_to_spherical(0, 400, 1600, 800).phi));

  // First column of a width-1600 map.
  CHECK(equirect_pixel_to_spherical(0, 0, 1600, 800).theta ==
        doctest::Approx(-kPi + kPi / 1600));

  for (int row = 0; row < 50; ++row) {
    for (int col = 0; col < 100; ++col) {
      SphericalCoord c = equirect_pixel_to_spherical(col, row, 100, 50);
      PixelPos p = equirect_spherical_to_pixel(c, 100, 50);
      CHECK(std::abs(p.col - col) < 1e-9);
      CHECK(std::abs(p.row - row) < 1e-9);
    }
  }
}

TEST_CASE("project_to_view center, boundary, and back face") {
  ViewFrame f = view_frame(0.3, -0.4, kFov100);
  ViewProjection center = project_to_view(f.z_axis, f);
  CHECK(center.covered);
  CHECK(center.u == doctest::Approx(0.0));
  CHECK(center.v == doctest::Approx(0.0));

  // Direction at angle fov/2 from the axis along x: u = tan(fov/2).
  double half = f.fov / 2;
  Direction3 edge{std::cos(half) * f.z_axis.x + std::sin(half) * f.x_axis.x,
                  std::cos(half) * f.z_axis.y + std::sin(half) * f.x_axis.y,
                  std::cos(half) * f.z_axis.z + std::sin(half) * f.x_axis.z};
  ViewProjection p = project_to_view(edge, f);
  CHECK(p.u == doctest::Approx(std::tan(half)).epsilon(1e-12));
  CHECK(p.v == doctest::Approx(0.0));
  CHECK(p.covered);

  Direction3 back{-f.z_axis.x, -f.z_axis.y, -f.z_axis.z};
  CHECK_FALSE(project_to_view(back, f).covered);
}

TEST_CASE("view_grid counts match the reference configuration") {
  CHECK(view_grid(90.0, kFov100).frames.size() == 6);
  CHECK(view_grid(45.0, kFov100).frames.size() == 26);
  CHECK(view_grid(30.0, kFov100).frames.size() == 62);
  CHECK(view_grid(22.5, kFov100).frames.size() == 114);
  for (double interval : {90.0, 45.0, 30.0, 22.5}) {
    CHECK(static_cast<int>(view_grid(interval, kFov100).frames.size()) ==
          view_grid_count(interval));
  }
  CHECK_THROWS_AS(view_grid(50.0, kFov100), InvalidIntervalError);
  CHECK_THROWS_AS(view_grid(0.0, kFov100), InvalidIntervalError);
  CHECK_THROWS_AS(view_grid(-45.0, kFov100), InvalidIntervalError);
}

TEST_CASE("90-degree grid is two poles plus four equator directions") {
  ViewGrid grid = view_grid(90.0, kFov100);
  std::multiset<double> latitudes;
  for (const ViewFrame& f : grid.frames) latitudes.insert(rad_to_deg(f.phi_c));
  CHECK(latitudes.count(-90.0) == 1);
  CHECK(latitudes.count(90.0) == 1);
  CHECK(latitudes.count(0.0) == 4);
}

TEST_CASE("view_grid has no duplicate directions") {
  for (double interval : {90.0, 45.0, 30.0, 22.5}) {
    ViewGrid grid = view_grid(interval, kFov100);
    std::set<std::pair<long, long>> seen;
    for (const ViewFrame& f : grid.frames) {
      auto key = std::make_pair(std::lround(f.theta_c * 1e9), std::lround(f.phi_c * 1e9));
      CHECK(seen.insert(key).second);
    }
  }
}

TEST_CASE("view centers project to the planar origin") {
  for (const ViewFrame& f : view_grid(45.0, kFov100).frames) {
    ViewProjection p = project_to_view(spherical_to_direction({f.theta_c, f.phi_c}), f);
    CHECK(p.covered);
    CHECK(std::abs(p.u) < 1e-12);
    CHECK(std::abs(p.v) < 1e-12);
  }
}

TEST_CASE("frame bases are orthonormal across a grid") {
  for (const ViewFrame& f : view_grid(22.5, kFov100).frames) {
    CHECK(std::abs(f.x_axis.norm() - 1.0) < 1e-12);
    CHECK(std::abs(f.y_axis.norm() - 1.0) < 1e-12);
    CHECK(std::abs(f.z_axis.norm() - 1.0) < 1e-12);
    CHECK(std::abs(f.x_axis.dot(f.y_axis)) < 1e-12);
    CHECK(std::abs(f.x_axis.dot(f.z_axis)) < 1e-12);
    CHECK(std::abs(f.y_axis.dot(f.z_axis)) < 1e-12);
  }
}

TEST_CASE("pixel -> view -> pixel round trip stays under half a pixel") {
  ViewGrid grid = view_grid(45.0, kFov100);
  std::mt19937_64 rng(23);
  int width = 1600, height = 800;
  int tested = 0;
  for (int i = 0; i < 2000; ++i) {
    double col = detail::uniform_range(rng, 0.0, width - 1.0);
    double row = detail::uniform_range(rng, 0.0, height - 1.0);
    Direction3 d = spherical_to_direction(equirect_pixel_to_spherical(col, row, width, height));
    for (const ViewFrame& f : grid.frames) {
      ViewProjection p = project_to_view(d, f);
      if (!p.covered) continue;
      // Reconstruct the direction from (u, v) and return to pixel space.
      Direction3 back{f.z_axis.x + p.u * f.x_axis.x + p.v * f.y_axis.x,
                      f.z_axis.y + p.u * f.x_axis.y + p.v * f.y_axis.y,
                      f.z_axis.z + p.u * f.x_axis.z + p.v * f.y_axis.z};
      PixelPos pos =
          equirect_spherical_to_pixel(direction_to_spherical(back.normalized()), width, height);
      double dc = std::abs(pos.col - col);
      dc = std::min(dc, width - dc);  // periodic column distance
      CHECK(dc < 0.5);
      CHECK(std::abs(pos.row - row) < 0.5);
      ++tested;
      break;
    }
  }
  CHECK(tested == 2000);  // every random pixel was covered by some frame
}

TEST_CASE("45-degree grid covers the whole equirectangular grid") {
  ViewGrid grid = view_grid(45.0, kFov100);
  int width = 200, height = 100;
  int multiplicity_min = 1000, multiplicity_max = 0;
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      Direction3 d = spherical_to_direction(equirect_pixel_to_spherical(col, row, width, height));
      int count = 0;
      for (const ViewFrame& f : grid.frames) {
        if (project_to_view(d, f).covered) ++count;
      }
      multiplicity_min = std::min(multiplicity_min, count);
      multiplicity_max = std::max(multiplicity_max, count);
    }
  }
  CHECK(multiplicity_min >= 1);
  CHECK(multiplicity_max <= static_cast<int>(grid.frames.size()));
  MESSAGE("coverage multiplicity range: ", multiplicity_min, " .. ", multiplicity_max);
}
