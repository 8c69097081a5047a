#include "scenegen/scene.hpp"

#include <array>
#include <cmath>

#include "scenegen/errors.hpp"

namespace scenegen {

namespace {
constexpr std::array<std::string_view, 4> kCategoryNames = {"floors", "walls", "ceilings", "objects"};
constexpr std::array<std::string_view, 3> kLightKindNames = {"point", "directional", "area"};
}  // namespace

std::string_view to_string(Category c) { return kCategoryNames[static_cast<int>(c)]; }

std::optional<Category> parse_category(std::string_view text) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == text) return static_cast<Category>(i);
  }
  return std::nullopt;
}

std::string_view to_string(LightKind k) { return kLightKindNames[static_cast<int>(k)]; }

std::optional<LightKind> parse_light_kind(std::string_view text) {
  for (std::size_t i = 0; i < kLightKindNames.size(); ++i) {
    if (kLightKindNames[i] == text) return static_cast<LightKind>(i);
  }
  return std::nullopt;
}

bool RoomShell::operator==(const RoomShell& o) const {
  if (floor_polygon != o.floor_polygon || wall_height != o.wall_height ||
      meshes.size() != o.meshes.size()) {
    return false;
  }
  for (auto a = meshes.begin(), b = o.meshes.begin(); a != meshes.end(); ++a, ++b) {
    if (a->first != b->first) return false;
    if (a->second == b->second) continue;
    if (!a->second || !b->second || !(*a->second == *b->second)) return false;
  }
  return true;
}

void validate_light(const Light& light, const std::string& path) {
  if (!(light.intensity > 0.0) || !std::isfinite(light.intensity)) {
    throw SceneFormatError("light intensity must be positive", path);
  }
  for (int c = 0; c < 3; ++c) {
    if (!(light.color[c] >= 0.0 && light.color[c] <= 1.0)) {
      throw SceneFormatError("color channel out of range", path);
    }
  }
  const bool wants_position = light.kind != LightKind::kDirectional;
  const bool wants_direction = light.kind == LightKind::kDirectional;
  const bool wants_extent = light.kind == LightKind::kArea;
  if (light.position.has_value() != wants_position) {
    throw SceneFormatError(wants_position ? "missing light position" : "unexpected light position", path);
  }
  if (light.direction.has_value() != wants_direction) {
    throw SceneFormatError(wants_direction ? "missing light direction" : "unexpected light direction", path);
  }
  if (light.extent.has_value() != wants_extent) {
    throw SceneFormatError(wants_extent ? "missing light extent" : "unexpected light extent", path);
  }
  if (light.position && !is_finite(*light.position)) {
    throw SceneFormatError("non-finite light position", path);
  }
  if (light.direction && !(std::abs(length(*light.direction) - 1.0) <= 1e-6)) {
    throw SceneFormatError("light direction must be unit length", path);
  }
  if (light.extent && !(light.extent->x > 0.0 && light.extent->y > 0.0)) {
    throw SceneFormatError("light extent must be positive", path);
  }
}

void validate_element(const SceneElement& element, const std::string& path) {
  if (element.asset_ref.empty() == element.mesh_ref.empty()) {
    throw SceneFormatError("element needs exactly one of asset_ref or mesh_ref", path);
  }
  if (element.placements.empty()) throw SceneFormatError("element has no placements", path);
  for (std::size_t i = 0; i < element.placements.size(); ++i) {
    const auto& p = element.placements[i];
    const std::string ppath = path + "/placements/" + std::to_string(i);
    if (!is_finite(p.position) || !std::isfinite(p.rotation_z)) {
      throw SceneFormatError("non-finite placement", ppath);
    }
    if (!is_finite(p.scale) || !(p.scale.x > 0.0 && p.scale.y > 0.0 && p.scale.z > 0.0)) {
      throw SceneFormatError("non-positive scale", ppath + "/scale");
    }
    if (!(p.rotation_z >= 0.0 && p.rotation_z < kTwoPi)) {
      throw SceneFormatError("rotation_z outside [0, 2pi)", ppath + "/rotation_z");
    }
  }
  if (element.material && element.material->description.empty()) {
    throw SceneFormatError("empty material description", path + "/material");
  }
}

void validate_scene(const Scene& scene) {
  for (const auto& [id, element] : scene.elements) {
    const std::string path = "elements/" + id;
    if (element.id != id) throw SceneFormatError("element id mismatch", path);
    validate_element(element, path);
    if (!element.mesh_ref.empty() && (!scene.room || !scene.room->meshes.contains(element.mesh_ref))) {
      throw SceneFormatError("mesh_ref not found in room", path + "/mesh_ref");
    }
  }
  for (const auto& [id, light] : scene.lights) {
    const std::string path = "lights/" + id;
    if (light.id != id) throw SceneFormatError("light id mismatch", path);
    if (scene.elements.contains(id)) throw SceneFormatError("duplicate id", path);
    validate_light(light, path);
  }
}

std::string next_free_id(const Scene& scene, std::string_view word) {
  for (int n = 1;; ++n) {
    std::string candidate = std::string(word) + "_" + std::to_string(n);
    if (!scene.elements.contains(candidate) && !scene.lights.contains(candidate)) return candidate;
  }
}

}  // namespace scenegen
