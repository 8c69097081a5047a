#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "scenegen/raycast.hpp"
#include "scenegen/scene.hpp"

namespace scenegen {

class AssetIndex;

/// Resolves an element to its mesh in local (canonical) coordinates.
class MeshSource {
 public:
  virtual ~MeshSource() = default;
  /// Returns nullptr when the element cannot be resolved.
  virtual std::shared_ptr<const TriangleMesh> local_mesh(const Scene& scene, const SceneElement& element) const = 0;
};

/// Room meshes come from the scene itself, asset meshes from an optional asset index.
class SceneMeshResolver final : public MeshSource {
 public:
  explicit SceneMeshResolver(const AssetIndex* assets = nullptr) : assets_(assets) {}
  std::shared_ptr<const TriangleMesh> local_mesh(const Scene& scene, const SceneElement& element) const override;

 private:
  const AssetIndex* assets_;
};

using ElementFilter = std::function<bool(const SceneElement&)>;

/// One world-space mesh per (element, placement). Throws UnresolvedMeshError.
std::vector<PosedMesh> posed_meshes(const Scene& scene, const MeshSource& source, const ElementFilter& filter = {});

PosedMesh posed_instance(const Scene& scene, const MeshSource& source, const SceneElement& element,
                         std::size_t placement_index);

inline bool is_object(const SceneElement& e) { return e.category == Category::kObjects; }

}  // namespace scenegen
