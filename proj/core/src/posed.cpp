#include "scenegen/posed.hpp"

#include "scenegen/asset_index.hpp"
#include "scenegen/errors.hpp"

namespace scenegen {

std::shared_ptr<const TriangleMesh> SceneMeshResolver::local_mesh(const Scene& scene,
                                                                  const SceneElement& element) const {
  if (!element.mesh_ref.empty()) {
    if (!scene.room) return nullptr;
    const auto it = scene.room->meshes.find(element.mesh_ref);
    return it == scene.room->meshes.end() ? nullptr : it->second;
  }
  if (assets_ == nullptr) return nullptr;
  return assets_->mesh(element.asset_ref);
}

PosedMesh posed_instance(const Scene& scene, const MeshSource& source, const SceneElement& element,
                         std::size_t placement_index) {
  const auto mesh = source.local_mesh(scene, element);
  if (!mesh) throw UnresolvedMeshError(element.id);
  return {element.id, placement_index, mesh->transformed(element.placements.at(placement_index))};
}

std::vector<PosedMesh> posed_meshes(const Scene& scene, const MeshSource& source, const ElementFilter& filter) {
  std::vector<PosedMesh> out;
  for (const auto& [id, element] : scene.elements) {
    if (filter && !filter(element)) continue;
    for (std::size_t i = 0; i < element.placements.size(); ++i) {
      out.push_back(posed_instance(scene, source, element, i));
    }
  }
  return out;
}

}  // namespace scenegen
