#include "scenegen/verify.hpp"

#include <algorithm>

#include "scenegen/collision.hpp"

namespace scenegen {

double bounds_excess(const Aabb& bounds, const Aabb& box, double tol) {
  double excess = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    excess = std::max(excess, (bounds.min[k] - tol) - box.min[k]);
    excess = std::max(excess, box.max[k] - (bounds.max[k] + tol));
  }
  return excess;
}

VerificationReport verify_scene(const Scene& scene, const MeshSource& meshes, const VerifyOptions& options) {
  VerificationReport report;
  const auto instances = posed_meshes(scene, meshes);
  if (!scene.bounds.empty()) {
    for (const auto& inst : instances) {
      if (inst.mesh.empty()) continue;
      const double excess = bounds_excess(scene.bounds, inst.mesh.bounds(), options.bounds_tol);
      if (excess > 0.0) report.out_of_bounds.push_back({inst.element_id, inst.placement_index, excess});
    }
  }
  std::vector<const PosedMesh*> objects;
  for (const auto& inst : instances) {
    if (scene.elements.at(inst.element_id).category == Category::kObjects && !inst.mesh.empty()) {
      objects.push_back(&inst);
    }
  }
  for (std::size_t i = 0; i < objects.size(); ++i) {
    for (std::size_t j = i + 1; j < objects.size(); ++j) {
      const auto& a = *objects[i];
      const auto& b = *objects[j];
      int axis = 0;
      const double depth = aabb_penetration(a.mesh.bounds(), b.mesh.bounds(), &axis);
      if (!(depth > options.collision_tol)) continue;
      if (!meshes_interpenetrate(a.mesh, b.mesh, options.collision_tol)) continue;
      report.collisions.push_back({a.element_id, a.placement_index, b.element_id, b.placement_index, depth, axis});
    }
  }
  return report;
}

}  // namespace scenegen
