#pragma once

#include <string>
#include <vector>

#include "scenegen/posed.hpp"
#include "scenegen/scene.hpp"

namespace scenegen {

inline constexpr double kBoundsTol = 0.01;

struct CollisionPair {
  std::string first;
  std::size_t first_placement = 0;
  std::string second;
  std::size_t second_placement = 0;
  double penetration = 0.0;
  int axis = 0;
};

struct OutOfBounds {
  std::string element_id;
  std::size_t placement_index = 0;
  /// Largest distance by which the instance box leaves the tolerance-expanded bounds.
  double excess = 0.0;
};

struct VerificationReport {
  std::vector<CollisionPair> collisions;
  std::vector<OutOfBounds> out_of_bounds;
  bool verified() const { return collisions.empty() && out_of_bounds.empty(); }
};

struct VerifyOptions {
  double collision_tol = 0.001;
  double bounds_tol = kBoundsTol;
};

/// Collision-free check over object-category instances and in-bounds check
/// over every instance. Scenes without bounds skip the in-bounds check.
/// Throws UnresolvedMeshError naming the element whose mesh cannot be found.
VerificationReport verify_scene(const Scene& scene, const MeshSource& meshes, const VerifyOptions& options = {});

/// Excess of `box` outside `bounds` expanded by tol; <= 0 when contained.
double bounds_excess(const Aabb& bounds, const Aabb& box, double tol);

}  // namespace scenegen
