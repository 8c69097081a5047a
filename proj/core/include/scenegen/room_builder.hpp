#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenegen/scene.hpp"

namespace scenegen {

class MaterialIndex;

enum class OpeningKind { kSingleDoor, kDoubleDoor, kSlidingDoor, kFoldingDoor, kWindow };

std::string_view to_string(OpeningKind kind);
std::optional<OpeningKind> parse_opening_kind(std::string_view text);
inline bool is_door(OpeningKind kind) { return kind != OpeningKind::kWindow; }

struct OpeningMaterials {
  std::string frame;
  std::string panel;
  std::optional<std::string> knob;
};

struct Opening {
  int wall_index = 0;  // edge i runs from floor_polygon[i] to floor_polygon[i + 1]
  double offset = 0.0;  // along the wall from its first vertex
  double width = 0.0;
  double height = 0.0;
  double sill = 0.0;
  OpeningKind kind = OpeningKind::kSingleDoor;
  OpeningMaterials materials;
};

struct RoomLayoutSpec {
  std::vector<Vec2> floor_polygon;  // counterclockwise, meters
  double wall_height = 0.0;
  std::vector<Opening> openings;
  std::string floor_material;
  std::string wall_material;
  std::string ceiling_material;
  std::string prompt;
};

struct LayoutViolation {
  std::string code;  // "vertex_count", "wall_height", "self_intersection", "orientation",
                     // "opening_range", "opening_overlap", "door_sill"
  std::string message;
};

std::vector<LayoutViolation> validate_layout(const RoomLayoutSpec& spec);

/// Builds the room shell as a scene: a floor, a ceiling, one element per wall
/// (with the opening rectangles cut out) and fixture elements for each opening.
/// Throws LayoutError listing the violations when the layout is invalid.
/// Default materials are resolved against `materials` when given.
Scene build_room(const RoomLayoutSpec& spec, const MaterialIndex* materials = nullptr);

RoomLayoutSpec layout_from_json(const nlohmann::json& j);
nlohmann::json layout_to_json(const RoomLayoutSpec& spec);

/// Shoelace area, positive for counterclockwise polygons.
double signed_area(std::span<const Vec2> polygon);

/// Ear-clipping triangulation of a simple counterclockwise polygon. Returned
/// triangles index into the polygon and are counterclockwise.
std::vector<std::array<std::size_t, 3>> triangulate_polygon(std::span<const Vec2> polygon);

/// Fixture frame bars are this wide and this deep.
inline constexpr double kFrameDepth = 0.05;
inline constexpr double kFrameWidth = 0.05;
inline constexpr double kFoldAngleDeg = 10.0;

}  // namespace scenegen
