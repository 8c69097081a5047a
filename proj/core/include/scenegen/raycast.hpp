#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scenegen/mesh.hpp"

namespace scenegen {

/// Ray with unit direction.
struct Ray {
  Vec3 origin;
  Vec3 direction;
};

struct RayHit {
  std::size_t mesh_index = 0;   // index into the MeshSet
  std::uint32_t triangle = 0;   // triangle id within that mesh
  double distance = 0.0;
  Vec3 point;
  Vec3 barycentric;  // weights of the triangle's three corners
};

/// A world-space mesh tagged with the scene instance it came from.
struct PosedMesh {
  std::string element_id;
  std::size_t placement_index = 0;
  TriangleMesh mesh;
};

/// Watertight ray/triangle test (shear-and-scale edge functions). Returns the
/// hit distance when the ray hits the triangle at t in (0, t_max).
std::optional<double> intersect_triangle(const Ray& ray, const Vec3& a, const Vec3& b, const Vec3& c,
                                         double t_max, Vec3* barycentric = nullptr);

/// Bounding volume hierarchy over all triangles of a set of posed meshes.
class MeshSet {
 public:
  MeshSet() = default;
  explicit MeshSet(std::vector<PosedMesh> meshes);

  const std::vector<PosedMesh>& meshes() const { return meshes_; }
  std::size_t triangle_count() const { return refs_.size(); }
  const Aabb& bounds() const { return bounds_; }

  /// Nearest hit with positive distance. Exact ties resolve to the lowest
  /// (mesh, triangle) pair so shared-edge hits are reported once.
  std::optional<RayHit> cast(const Ray& ray) const;

  /// Same contract as cast(), testing every triangle.
  std::optional<RayHit> cast_linear(const Ray& ray) const;

 private:
  struct TriRef {
    std::uint32_t mesh;
    std::uint32_t tri;
  };
  struct Node {
    Aabb box;
    std::uint32_t first = 0;  // leaf: first ref; inner: right child index
    std::uint32_t count = 0;  // leaf when count > 0
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids);
  bool test_ref(const Ray& ray, const TriRef& ref, std::optional<RayHit>& best) const;

  std::vector<PosedMesh> meshes_;
  std::vector<TriRef> refs_;
  std::vector<Node> nodes_;
  Aabb bounds_;
};

/// Convenience free function mirroring MeshSet::cast.
inline std::optional<RayHit> cast_ray(const MeshSet& meshes, const Ray& ray) { return meshes.cast(ray); }

}  // namespace scenegen
