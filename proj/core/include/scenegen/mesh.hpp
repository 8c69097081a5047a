#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "scenegen/placement.hpp"
#include "scenegen/vec.hpp"

namespace scenegen {

using Triangle = std::array<std::uint32_t, 3>;

/// Immutable indexed triangle mesh with cached per-face unit normals and areas.
/// Construction rejects out-of-range indices, non-finite coordinates and
/// degenerate faces (area < 1e-12 m²).
class TriangleMesh {
 public:
  static constexpr double kMinTriangleArea = 1e-12;

  TriangleMesh() = default;
  TriangleMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Vec3>& normals() const { return normals_; }
  const std::vector<double>& areas() const { return areas_; }
  const Aabb& bounds() const { return bounds_; }

  std::size_t triangle_count() const { return triangles_.size(); }
  bool empty() const { return triangles_.empty(); }

  std::array<Vec3, 3> corners(std::size_t tri) const {
    const auto& t = triangles_[tri];
    return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
  }

  double total_area() const;

  /// Returns a copy with every vertex mapped through the placement.
  TriangleMesh transformed(const Placement& placement) const;

  /// Concatenates meshes into one vertex/index buffer.
  static TriangleMesh merge(std::span<const TriangleMesh> parts);

  bool operator==(const TriangleMesh& o) const {
    return vertices_ == o.vertices_ && triangles_ == o.triangles_;
  }

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Vec3> normals_;
  std::vector<double> areas_;
  Aabb bounds_;
};

/// Closed box with outward-facing triangles.
TriangleMesh make_box(const Vec3& min_corner, const Vec3& max_corner);

/// Unit sphere approximation (UV sphere) with outward normals.
TriangleMesh make_uv_sphere(const Vec3& center, double radius, int stacks, int slices);

/// OBJ subset: `v x y z` and `f a b c ...` (1-based; `a/b/c` index forms accepted, polygons fan-triangulated).
TriangleMesh parse_obj(const std::string& text);
TriangleMesh load_obj(const std::filesystem::path& path);
std::string format_obj(const TriangleMesh& mesh);
void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

}  // namespace scenegen
