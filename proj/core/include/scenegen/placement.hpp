#pragma once

#include "scenegen/vec.hpp"

namespace scenegen {

/// Position (meters), rotation about +z (radians, [0, 2π)) and per-axis scale.
/// Maps a local point p to R_z(rotation_z) * (scale ⊙ p) + position.
struct Placement {
  Vec3 position{};
  double rotation_z = 0.0;
  Vec3 scale{1.0, 1.0, 1.0};

  Vec3 apply(const Vec3& local) const {
    const Vec3 s = hadamard(scale, local);
    const double c = std::cos(rotation_z);
    const double n = std::sin(rotation_z);
    return Vec3{c * s.x - n * s.y, n * s.x + c * s.y, s.z} + position;
  }

  bool operator==(const Placement&) const = default;
};

inline bool is_valid(const Placement& p) {
  return is_finite(p.position) && is_finite(p.scale) && std::isfinite(p.rotation_z) &&
         p.scale.x > 0.0 && p.scale.y > 0.0 && p.scale.z > 0.0;
}

}  // namespace scenegen
