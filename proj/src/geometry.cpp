#include "odisal/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace odisal {

namespace {

// 180/d and 360/d as integers, or -1 when d does not divide evenly.
int even_divisions(double span_deg, double interval_deg) {
  if (interval_deg <= 0.0) return -1;
  double q = span_deg / interval_deg;
  double rounded = std::round(q);
  if (rounded < 1.0 || std::abs(q - rounded) > 1e-9) return -1;
  return static_cast<int>(rounded);
}

double normalize_theta(double theta) {
  double t = std::fmod(theta + kPi, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  return t - kPi;
}

}  // namespace

double Direction3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Direction3 Direction3::normalized() const {
  double n = norm();
  if (n == 0.0) throw InvalidArgumentError("cannot normalize a zero vector");
  return {x / n, y / n, z / n};
}

ViewFrame view_frame(double theta_c, double phi_c, double fov) {
  if (!(fov > 0.0 && fov < kPi)) {
    throw InvalidFovError("fov must lie in (0, pi), got " + std::to_string(fov));
  }
  if (!(phi_c >= -kPi / 2 - 1e-12 && phi_c <= kPi / 2 + 1e-12)) {
    throw InvalidArgumentError("phi_c must lie in [-pi/2, pi/2]");
  }
  ViewFrame f;
  f.theta_c = normalize_theta(theta_c);
  f.phi_c = phi_c;
  f.fov = fov;
  f.x_axis = {-std::sin(theta_c), -std::cos(theta_c), 0.0};
  f.y_axis = {-std::sin(phi_c) * std::cos(theta_c), std::sin(phi_c) * std::sin(theta_c),
              std::cos(phi_c)};
  f.z_axis = f.x_axis.cross(f.y_axis);
  return f;
}

Direction3 spherical_to_direction(const SphericalCoord& c) {
  return {-std::cos(c.phi) * std::cos(c.theta), std::cos(c.phi) * std::sin(c.theta),
          -std::sin(c.phi)};
}

SphericalCoord direction_to_spherical(const Direction3& d) {
  double dz = std::clamp(d.z, -1.0, 1.0);
  SphericalCoord c;
  c.phi = -std::asin(dz);
  if (std::abs(dz) >= 1.0 - 1e-15) {
    c.theta = 0.0;
  } else {
    c.theta = normalize_theta(std::atan2(d.y, -d.x));
  }
  return c;
}

SphericalCoord equirect_pixel_to_spherical(double col, double row, int width, int height) {
  SphericalCoord c;
  c.theta = ((col + 0.5) / width) * 2.0 * kPi - kPi;
  c.phi = kPi / 2 - ((row + 0.5) / height) * kPi;
  return c;
}

PixelPos equirect_spherical_to_pixel(const SphericalCoord& c, int width, int height) {
  PixelPos p;
  p.col = (c.theta + kPi) / (2.0 * kPi) * width - 0.5;
  p.row = (kPi / 2 - c.phi) / kPi * height - 0.5;
  return p;
}

ViewProjection project_to_view(const Direction3& d, const ViewFrame& frame) {
  ViewProjection p;
  double dz = d.dot(frame.z_axis);
  if (dz <= 0.0) {
    return p;  // back-facing: uncovered, (u, v) left at 0
  }
  p.u = d.dot(frame.x_axis) / dz;
  p.v = d.dot(frame.y_axis) / dz;
  double limit = std::tan(frame.fov / 2);
  p.covered = std::abs(p.u) <= limit && std::abs(p.v) <= limit;
  return p;
}

int view_grid_count(double interval_deg) {
  int lat_steps = even_divisions(180.0, interval_deg);
  int lon_steps = even_divisions(360.0, interval_deg);
  if (lat_steps < 0 || lon_steps < 0) {
    throw InvalidIntervalError("interval must divide 180 and 360 evenly, got " +
                               std::to_string(interval_deg) + " deg");
  }
  return 2 + (lat_steps - 1) * lon_steps;
}

ViewGrid view_grid(double interval_deg, double fov) {
  int lat_steps = even_divisions(180.0, interval_deg);
  int lon_steps = even_divisions(360.0, interval_deg);
  if (lat_steps < 0 || lon_steps < 0) {
    throw InvalidIntervalError("interval must divide 180 and 360 evenly, got " +
                               std::to_string(interval_deg) + " deg");
  }
  ViewGrid grid;
  grid.interval_deg = interval_deg;
  grid.fov = fov;
  for (int i = 0; i <= lat_steps; ++i) {
    double phi_deg = -90.0 + i * interval_deg;
    double phi_c = deg_to_rad(phi_deg);
    bool pole = (i == 0 || i == lat_steps);
    int n_lon = pole ? 1 : lon_steps;
    for (int j = 0; j < n_lon; ++j) {
      double theta_c = deg_to_rad(j * interval_deg);
      grid.frames.push_back(view_frame(theta_c, phi_c, fov));
    }
  }
  return grid;
}

}  // namespace odisal
