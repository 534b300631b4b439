#pragma once

#include <vector>

#include "odisal/errors.hpp"

namespace odisal {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Longitude theta in [-pi, pi), latitude phi in [-pi/2, pi/2].
struct SphericalCoord {
  double theta = 0.0;
  double phi = 0.0;
};

/// Unit vector in the 3D Euclidean frame of the sphere.
struct Direction3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const Direction3& o) const { return x * o.x + y * o.y + z * o.z; }
  Direction3 cross(const Direction3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const;
  Direction3 normalized() const;
};

/// Orthonormal basis of one extracted planar view: x_axis/y_axis span the
/// image plane, z_axis is the viewing direction.
struct ViewFrame {
  double theta_c = 0.0;
  double phi_c = 0.0;
  Direction3 x_axis;
  Direction3 y_axis;
  Direction3 z_axis;
  double fov = 0.0;
};

/// Viewing directions spaced at a constant angular interval, one frame per
/// pole and 360/interval frames per intermediate latitude.
struct ViewGrid {
  double interval_deg = 0.0;
  double fov = 0.0;
  std::vector<ViewFrame> frames;
};

/// Gnomonic image-plane coordinates of a direction in a view, plus whether
/// the direction falls inside the square view frustum.
struct ViewProjection {
  double u = 0.0;
  double v = 0.0;
  bool covered = false;
};

/// Continuous equirectangular pixel position.
struct PixelPos {
  double col = 0.0;
  double row = 0.0;
};

/// Builds the view basis for direction (theta_c, phi_c):
///   x_axis = (-sin tc, -cos tc, 0)
///   y_axis = (-sin pc cos tc, sin pc sin tc, cos pc)
///   z_axis = x_axis cross y_axis
/// Throws InvalidFovError unless 0 < fov < pi.
ViewFrame view_frame(double theta_c, double phi_c, double fov);

/// d(theta, phi) = (-cos phi cos theta, cos phi sin theta, -sin phi); equals
/// the z_axis of the view frame at the same direction.
Direction3 spherical_to_direction(const SphericalCoord& c);

/// Exact inverse of spherical_to_direction; theta normalized to 0 at poles.
SphericalCoord direction_to_spherical(const Direction3& d);

/// Pixel centers map linearly: theta = ((col+0.5)/width)*2pi - pi,
/// phi = pi/2 - ((row+0.5)/height)*pi.
SphericalCoord equirect_pixel_to_spherical(double col, double row, int width, int height);

PixelPos equirect_spherical_to_pixel(const SphericalCoord& c, int width, int height);

/// Gnomonic projection u = (d.x_axis)/(d.z_axis), v = (d.y_axis)/(d.z_axis);
/// covered iff the direction is front-facing and |u|,|v| <= tan(fov/2).
ViewProjection project_to_view(const Direction3& d, const ViewFrame& frame);

/// Grid of viewing directions at the given interval. Valid intervals divide
/// both 180 and 360 evenly (e.g. 90, 45, 30, 22.5); others raise
/// InvalidIntervalError. Poles carry exactly one frame at theta_c = 0.
ViewGrid view_grid(double interval_deg, double fov);

/// Frame count of view_grid(interval_deg, .): 2 + (180/d - 1) * (360/d).
int view_grid_count(double interval_deg);

}  // namespace odisal
