#pragma once

#include <span>
#include <string>
#include <vector>

#include "scenegen/raycast.hpp"

namespace scenegen {

struct Contact {
  std::string element_id;
  std::size_t placement_index = 0;
  /// Smallest overlap of the two world AABBs over the three axes, meters.
  double penetration = 0.0;
  int axis = 0;  // 0 = x, 1 = y, 2 = z
};

struct CollisionReport {
  std::vector<Contact> contacts;
  bool colliding() const { return !contacts.empty(); }
};

inline constexpr double kDefaultCollisionTol = 0.001;

/// Minimum per-axis overlap of two boxes (negative when separated along some axis).
double aabb_penetration(const Aabb& a, const Aabb& b, int* axis = nullptr);

/// Narrow phase: do two closed meshes interpenetrate by more than tol?
/// Faces that merely touch or lie in a shared plane are not a collision.
bool meshes_interpenetrate(const TriangleMesh& a, const TriangleMesh& b, double tol);

/// Generalized winding number of a closed mesh about a point (≈1 inside, ≈0 outside).
double winding_number(const TriangleMesh& mesh, const Vec3& point);

/// Broad phase by AABB overlap, then narrow phase. Scene meshes whose id and
/// placement index equal the candidate's are skipped.
CollisionReport check_collision(const PosedMesh& candidate, std::span<const PosedMesh> scene_meshes,
                                double tol = kDefaultCollisionTol);

}  // namespace scenegen
