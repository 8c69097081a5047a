#pragma once

#include <optional>

#include "scenegen/raycast.hpp"
#include "scenegen/vec.hpp"

namespace scenegen {

struct Pixel {
  int u = 0;
  int v = 0;
  bool operator==(const Pixel&) const = default;
};

/// Pinhole camera with square pixels and the principal point at the image center.
/// Image coordinates: u grows right, v grows down; pixel (u, v) covers [u, u+1) × [v, v+1).
struct Camera {
  Vec3 position;
  Vec3 look_at{0.0, 0.0, -1.0};
  Vec3 up{0.0, 0.0, 1.0};
  double vertical_fov = deg_to_rad(60.0);
  int width = 256;
  int height = 256;

  /// Throws GeometryError when the camera is degenerate.
  void validate() const;

  Vec3 forward() const;
  Vec3 right() const;
  Vec3 true_up() const;
  /// Focal length in pixels.
  double focal() const;

  bool operator==(const Camera&) const = default;
};

/// Ray through the center of an integer pixel. Throws GeometryError when out of bounds.
Ray pixel_to_ray(const Camera& camera, Pixel pixel);

/// Ray through a continuous image point.
Ray image_point_to_ray(const Camera& camera, Vec2 image_point);

/// Continuous image coordinates of a world point, or nullopt when it is not in front of the camera.
std::optional<Vec2> project(const Camera& camera, const Vec3& world);

/// Integer pixel containing a continuous image point, or nullopt when outside the image.
std::optional<Pixel> to_pixel(const Camera& camera, Vec2 image_point);

/// Equirectangular camera; width must equal 2 × height.
struct PanoCamera {
  Vec3 position;
  int width = 512;
  int height = 256;

  void validate() const;
  bool operator==(const PanoCamera&) const = default;
};

/// Unit direction for pixel (u, v): longitude 2π(u+0.5)/W − π, latitude π/2 − π(v+0.5)/H.
Vec3 pano_direction(const PanoCamera& camera, Pixel pixel);

}  // namespace scenegen
