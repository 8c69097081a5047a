#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenegen/mesh.hpp"
#include "scenegen/placement.hpp"
#include "scenegen/vec.hpp"

namespace scenegen {

enum class Category { kFloors, kWalls, kCeilings, kObjects };

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view text);

struct MaterialAssignment {
  std::string description;
  std::string resolved_id;  // empty until retrieval

  bool operator==(const MaterialAssignment&) const = default;
};

enum class LightKind { kPoint, kDirectional, kArea };

std::string_view to_string(LightKind k);
std::optional<LightKind> parse_light_kind(std::string_view text);

struct Light {
  std::string id;
  LightKind kind = LightKind::kPoint;
  double intensity = 1.0;
  Vec3 color{1.0, 1.0, 1.0};
  std::optional<Vec3> position;   // point, area
  std::optional<Vec3> direction;  // directional
  std::optional<Vec2> extent;     // area

  bool operator==(const Light&) const = default;
};

struct SceneElement {
  std::string id;
  Category category = Category::kObjects;
  std::string asset_ref;  // manifest id; exactly one of asset_ref / mesh_ref is set
  std::string mesh_ref;   // key into RoomShell::meshes
  std::vector<Placement> placements;
  std::optional<MaterialAssignment> material;
  std::map<std::string, std::string> metadata;

  bool operator==(const SceneElement&) const = default;
};

/// Procedurally built room geometry. Meshes are in world coordinates and shared
/// between scene copies (they are never mutated after construction).
struct RoomShell {
  std::vector<Vec2> floor_polygon;
  double wall_height = 0.0;
  std::map<std::string, std::shared_ptr<const TriangleMesh>> meshes;

  bool operator==(const RoomShell& o) const;
};

struct Scene {
  std::string prompt;
  Aabb bounds;
  std::map<std::string, SceneElement> elements;
  std::map<std::string, Light> lights;
  std::optional<RoomShell> room;

  bool operator==(const Scene&) const = default;
};

/// Copies are independent; shared room meshes are immutable.
inline Scene clone_scene(const Scene& scene) { return scene; }

/// Throws SceneFormatError naming the offending path when an invariant is broken.
void validate_light(const Light& light, const std::string& path);
void validate_element(const SceneElement& element, const std::string& path);
void validate_scene(const Scene& scene);

/// Returns `<word>_<n>` with the smallest n >= 1 not used by an element or light.
std::string next_free_id(const Scene& scene, std::string_view word);

}  // namespace scenegen
