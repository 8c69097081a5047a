#include "scenegen/camera.hpp"

#include <string>

#include "scenegen/errors.hpp"

namespace scenegen {

void Camera::validate() const {
  if (width <= 0 || height <= 0) throw GeometryError("camera resolution must be positive");
  if (!(vertical_fov > 0.0 && vertical_fov < kPi)) throw GeometryError("camera fov must be in (0, pi)");
  const Vec3 f = look_at - position;
  if (!(length(f) > 0.0)) throw GeometryError("camera look_at equals position");
  if (!(length(cross(normalized(f), normalized(up))) > 1e-9)) {
    throw GeometryError("camera up is parallel to the view direction");
  }
}

Vec3 Camera::forward() const { return normalized(look_at - position); }
Vec3 Camera::right() const { return normalized(cross(forward(), up)); }
Vec3 Camera::true_up() const { return cross(right(), forward()); }
double Camera::focal() const { return 0.5 * height / std::tan(0.5 * vertical_fov); }

Ray image_point_to_ray(const Camera& camera, Vec2 image_point) {
  const double x = image_point.x - 0.5 * camera.width;
  const double y = 0.5 * camera.height - image_point.y;
  const Vec3 dir = camera.forward() * camera.focal() + camera.right() * x + camera.true_up() * y;
  return {camera.position, normalized(dir)};
}

Ray pixel_to_ray(const Camera& camera, Pixel pixel) {
  if (pixel.u < 0 || pixel.v < 0 || pixel.u >= camera.width || pixel.v >= camera.height) {
    throw GeometryError("pixel (" + std::to_string(pixel.u) + ", " + std::to_string(pixel.v) +
                        ") outside image");
  }
  return image_point_to_ray(camera, {pixel.u + 0.5, pixel.v + 0.5});
}

std::optional<Vec2> project(const Camera& camera, const Vec3& world) {
  const Vec3 rel = world - camera.position;
  const double z = dot(rel, camera.forward());
  if (!(z > 0.0)) return std::nullopt;
  const double f = camera.focal();
  return Vec2{0.5 * camera.width + f * dot(rel, camera.right()) / z,
              0.5 * camera.height - f * dot(rel, camera.true_up()) / z};
}

std::optional<Pixel> to_pixel(const Camera& camera, Vec2 p) {
  if (!(p.x >= 0.0 && p.y >= 0.0 && p.x < camera.width && p.y < camera.height)) return std::nullopt;
  return Pixel{static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y))};
}

void PanoCamera::validate() const {
  if (height <= 0 || width != 2 * height) throw GeometryError("panorama width must be 2 x height");
  if (!is_finite(position)) throw GeometryError("non-finite panorama position");
}

Vec3 pano_direction(const PanoCamera& camera, Pixel pixel) {
  const double lon = kTwoPi * (pixel.u + 0.5) / camera.width - kPi;
  const double lat = 0.5 * kPi - kPi * (pixel.v + 0.5) / camera.height;
  return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

}  // namespace scenegen
