#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "scenegen/scene.hpp"

namespace scenegen {

/// Canonical scene JSON: sorted keys, numbers rounded to 9 significant digits.
nlohmann::json scene_to_json(const Scene& scene);
std::string serialize_scene(const Scene& scene);

/// Parses and validates scene JSON. Rejects unknown categories, non-positive
/// scale, out-of-range colors and duplicate ids with a SceneFormatError whose
/// path names the offender. Rotations are wrapped into [0, 2π).
Scene scene_from_json(const nlohmann::json& doc);
Scene deserialize_scene(std::string_view text);

/// Shape helpers shared by other JSON formats in the project.
nlohmann::json vec_to_json(const Vec3& v);
nlohmann::json vec_to_json(const Vec2& v);
nlohmann::json number_to_json(double value);
Vec3 vec3_from_json(const nlohmann::json& j, const std::string& path);
Vec2 vec2_from_json(const nlohmann::json& j, const std::string& path);
double number_from_json(const nlohmann::json& j, const std::string& path);
std::string string_from_json(const nlohmann::json& j, const std::string& path);

/// Parses JSON text, rejecting duplicate object keys (reported as "duplicate id at <path>").
nlohmann::json parse_json_strict(std::string_view text);

nlohmann::json mesh_to_json(const TriangleMesh& mesh);
TriangleMesh mesh_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace scenegen
