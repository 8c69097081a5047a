#include "scenegen/room_builder.hpp"

#include <algorithm>
#include <cmath>
#include <list>

#include "scenegen/asset_index.hpp"
#include "scenegen/errors.hpp"
#include "scenegen/scene_json.hpp"

namespace scenegen {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 5> kOpeningNames = {"single_door", "double_door", "sliding_door",
                                                           "folding_door", "window"};

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return cross(q - p, r - p); };
  const auto on_segment = [](Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
  };
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

double wall_length(const RoomLayoutSpec& spec, int wall) {
  const auto n = spec.floor_polygon.size();
  return length(spec.floor_polygon[(wall + 1) % n] - spec.floor_polygon[wall]);
}

/// Orthonormal frame of one wall: s along the wall, n into the room, z up.
struct WallFrame {
  Vec2 origin;
  Vec2 dir;
  Vec2 inward;

  Vec3 to_world(double s, double n, double z) const {
    return {origin.x + dir.x * s + inward.x * n, origin.y + dir.y * s + inward.y * n, z};
  }
};

WallFrame wall_frame(const RoomLayoutSpec& spec, int wall) {
  const auto n = spec.floor_polygon.size();
  const Vec2 a = spec.floor_polygon[wall];
  const Vec2 b = spec.floor_polygon[(wall + 1) % n];
  const Vec2 dir = (b - a) * (1.0 / length(b - a));
  return {a, dir, {-dir.y, dir.x}};
}

struct MeshBuilder {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;

  void quad_inward(const WallFrame& f, double s0, double s1, double z0, double z1) {
    const auto base = static_cast<std::uint32_t>(vertices.size());
    vertices.push_back(f.to_world(s0, 0.0, z0));
    vertices.push_back(f.to_world(s1, 0.0, z0));
    vertices.push_back(f.to_world(s1, 0.0, z1));
    vertices.push_back(f.to_world(s0, 0.0, z1));
    triangles.push_back({base, base + 2, base + 1});
    triangles.push_back({base, base + 3, base + 2});
  }

  // Box given in wall coordinates, optionally turned about a vertical hinge at (hs, hn).
  void wall_box(const WallFrame& f, Vec3 lo, Vec3 hi, double hinge_angle = 0.0, Vec2 hinge = {}) {
    const TriangleMesh box = make_box(lo, hi);
    const auto base = static_cast<std::uint32_t>(vertices.size());
    const double c = std::cos(hinge_angle);
    const double s = std::sin(hinge_angle);
    for (const auto& v : box.vertices()) {
      const double ls = v.x - hinge.x;
      const double ln = v.y - hinge.y;
      vertices.push_back(f.to_world(hinge.x + c * ls - s * ln, hinge.y + s * ls + c * ln, v.z));
    }
    for (const auto& t : box.triangles()) triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
  }

  std::shared_ptr<const TriangleMesh> finish() {
    return std::make_shared<const TriangleMesh>(std::move(vertices), std::move(triangles));
  }
};

SceneElement shell_element(const std::string& id, Category category, const std::string& material,
                           const MaterialIndex* materials) {
  SceneElement e;
  e.id = id;
  e.category = category;
  e.mesh_ref = id;
  e.placements.push_back({});
  if (!material.empty()) {
    MaterialAssignment m{material, ""};
    if (materials) {
      const auto hits = materials->retrieve(material, 1);
      if (!hits.empty()) m.resolved_id = hits.front().id;
    }
    e.material = std::move(m);
  }
  return e;
}

}  // namespace

std::string_view to_string(OpeningKind kind) { return kOpeningNames[static_cast<int>(kind)]; }

std::optional<OpeningKind> parse_opening_kind(std::string_view text) {
  for (std::size_t i = 0; i < kOpeningNames.size(); ++i) {
    if (kOpeningNames[i] == text) return static_cast<OpeningKind>(i);
  }
  return std::nullopt;
}

double signed_area(std::span<const Vec2> polygon) {
  double twice = 0.0;
  for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
    twice += cross(polygon[j], polygon[i]);
  }
  return 0.5 * twice;
}

std::vector<std::array<std::size_t, 3>> triangulate_polygon(std::span<const Vec2> polygon) {
  std::vector<std::array<std::size_t, 3>> out;
  std::list<std::size_t> ring;
  for (std::size_t i = 0; i < polygon.size(); ++i) ring.push_back(i);

  const auto prev_of = [&](std::list<std::size_t>::iterator it) {
    return it == ring.begin() ? std::prev(ring.end()) : std::prev(it);
  };
  const auto next_of = [&](std::list<std::size_t>::iterator it) {
    auto n = std::next(it);
    return n == ring.end() ? ring.begin() : n;
  };
  const auto inside = [](Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
    return cross(b - a, p - a) >= 0.0 && cross(c - b, p - b) >= 0.0 && cross(a - c, p - c) >= 0.0;
  };

  while (ring.size() > 3) {
    bool clipped = false;
    for (auto it = ring.begin(); it != ring.end(); ++it) {
      const auto ip = *prev_of(it);
      const auto in = *next_of(it);
      const Vec2 a = polygon[ip];
      const Vec2 b = polygon[*it];
      const Vec2 c = polygon[in];
      if (cross(b - a, c - b) <= 0.0) continue;  // reflex or collinear
      bool blocked = false;
      for (auto other : ring) {
        if (other == ip || other == *it || other == in) continue;
        const Vec2 p = polygon[other];
        if (p == a || p == b || p == c) continue;
        if (inside(p, a, b, c)) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      out.push_back({ip, *it, in});
      ring.erase(it);
      clipped = true;
      break;
    }
    if (!clipped) {
      // Only collinear runs remain; dropping one vertex loses no area.
      bool dropped = false;
      for (auto it = ring.begin(); it != ring.end(); ++it) {
        const Vec2 a = polygon[*prev_of(it)];
        const Vec2 b = polygon[*it];
        const Vec2 c = polygon[*next_of(it)];
        if (cross(b - a, c - b) == 0.0) {
          ring.erase(it);
          dropped = true;
          break;
        }
      }
      if (!dropped) throw LayoutError("polygon cannot be triangulated");
    }
  }
  if (ring.size() == 3) {
    auto it = ring.begin();
    const auto a = *it++;
    const auto b = *it++;
    const auto c = *it;
    if (cross(polygon[b] - polygon[a], polygon[c] - polygon[b]) > 0.0) out.push_back({a, b, c});
  }
  return out;
}

std::vector<LayoutViolation> validate_layout(const RoomLayoutSpec& spec) {
  std::vector<LayoutViolation> out;
  const auto& poly = spec.floor_polygon;
  const std::size_t n = poly.size();
  if (n < 3) {
    out.push_back({"vertex_count", "floor polygon needs at least 3 vertices"});
    return out;
  }
  if (!(spec.wall_height > 0.0)) out.push_back({"wall_height", "wall height must be positive"});
  for (std::size_t i = 0; i < n; ++i) {
    if (length(poly[(i + 1) % n] - poly[i]) <= 0.0) {
      out.push_back({"self_intersection", "zero-length wall " + std::to_string(i)});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) {
        out.push_back({"self_intersection",
                       "walls " + std::to_string(i) + " and " + std::to_string(j) + " intersect"});
      }
    }
  }
  if (signed_area(poly) <= 0.0) {
    out.push_back({"orientation", "floor polygon must be counterclockwise"});
  }
  for (std::size_t k = 0; k < spec.openings.size(); ++k) {
    const auto& o = spec.openings[k];
    const std::string name = "opening " + std::to_string(k);
    if (o.wall_index < 0 || static_cast<std::size_t>(o.wall_index) >= n) {
      out.push_back({"opening_range", name + " references missing wall " + std::to_string(o.wall_index)});
      continue;
    }
    const double len = wall_length(spec, o.wall_index);
    if (!(o.width > 0.0) || !(o.height > 0.0)) out.push_back({"opening_range", name + " has no extent"});
    if (o.offset < 0.0 || o.offset + o.width > len) {
      out.push_back({"opening_range", name + " exceeds wall " + std::to_string(o.wall_index) + " length"});
    }
    if (o.sill < 0.0 || o.sill + o.height > spec.wall_height) {
      out.push_back({"opening_range", name + " exceeds wall height"});
    }
    if (is_door(o.kind) && o.sill != 0.0) out.push_back({"door_sill", name + " is a door with non-zero sill"});
  }
  for (std::size_t a = 0; a < spec.openings.size(); ++a) {
    for (std::size_t b = a + 1; b < spec.openings.size(); ++b) {
      const auto& oa = spec.openings[a];
      const auto& ob = spec.openings[b];
      if (oa.wall_index != ob.wall_index) continue;
      const double overlap = std::min(oa.offset + oa.width, ob.offset + ob.width) - std::max(oa.offset, ob.offset);
      if (overlap > 0.0) {
        out.push_back({"opening_overlap", "openings " + std::to_string(a) + " and " + std::to_string(b) +
                                              " overlap on wall " + std::to_string(oa.wall_index)});
      }
    }
  }
  return out;
}

Scene build_room(const RoomLayoutSpec& spec, const MaterialIndex* materials) {
  const auto violations = validate_layout(spec);
  if (!violations.empty()) {
    std::string message = "invalid layout:";
    for (const auto& v : violations) message += " [" + v.code + "] " + v.message + ";";
    throw LayoutError(message);
  }
  const auto& poly = spec.floor_polygon;
  const std::size_t n = poly.size();
  const double h = spec.wall_height;

  Scene scene;
  scene.prompt = spec.prompt;
  RoomShell room;
  room.floor_polygon = poly;
  room.wall_height = h;

  for (const auto& p : poly) {
    scene.bounds.extend(Vec3{p.x, p.y, 0.0});
    scene.bounds.extend(Vec3{p.x, p.y, h});
  }

  const auto tris = triangulate_polygon(poly);
  {
    MeshBuilder floor;
    MeshBuilder ceiling;
    for (const auto& p : poly) {
      floor.vertices.push_back({p.x, p.y, 0.0});
      ceiling.vertices.push_back({p.x, p.y, h});
    }
    for (const auto& t : tris) {
      const auto a = static_cast<std::uint32_t>(t[0]);
      const auto b = static_cast<std::uint32_t>(t[1]);
      const auto c = static_cast<std::uint32_t>(t[2]);
      floor.triangles.push_back({a, b, c});
      ceiling.triangles.push_back({a, c, b});
    }
    room.meshes["floor"] = floor.finish();
    room.meshes["ceiling"] = ceiling.finish();
    scene.elements["floor"] = shell_element("floor", Category::kFloors, spec.floor_material, materials);
    scene.elements["ceiling"] = shell_element("ceiling", Category::kCeilings, spec.ceiling_material, materials);
  }

  for (std::size_t w = 0; w < n; ++w) {
    const auto frame = wall_frame(spec, static_cast<int>(w));
    const double len = wall_length(spec, static_cast<int>(w));
    std::vector<const Opening*> cuts;
    for (const auto& o : spec.openings) {
      if (static_cast<std::size_t>(o.wall_index) == w) cuts.push_back(&o);
    }
    std::sort(cuts.begin(), cuts.end(), [](const Opening* a, const Opening* b) { return a->offset < b->offset; });
    MeshBuilder wall;
    constexpr double kMinSpan = 1e-9;
    double cursor = 0.0;
    for (const auto* o : cuts) {
      if (o->offset - cursor > kMinSpan) wall.quad_inward(frame, cursor, o->offset, 0.0, h);
      if (o->sill > kMinSpan) wall.quad_inward(frame, o->offset, o->offset + o->width, 0.0, o->sill);
      const double top = o->sill + o->height;
      if (h - top > kMinSpan) wall.quad_inward(frame, o->offset, o->offset + o->width, top, h);
      cursor = o->offset + o->width;
    }
    if (len - cursor > kMinSpan) wall.quad_inward(frame, cursor, len, 0.0, h);
    const std::string id = "wall_" + std::to_string(w);
    room.meshes[id] = wall.finish();
    auto element = shell_element(id, Category::kWalls, spec.wall_material, materials);
    element.metadata["wall_index"] = std::to_string(w);
    scene.elements[id] = std::move(element);
  }

  for (std::size_t k = 0; k < spec.openings.size(); ++k) {
    const auto& o = spec.openings[k];
    const auto f = wall_frame(spec, o.wall_index);
    const double s0 = o.offset;
    const double s1 = o.offset + o.width;
    const double z0 = o.sill;
    const double z1 = o.sill + o.height;
    const double fw = std::min({kFrameWidth, o.width / 4.0, o.height / 4.0});
    const double in_s0 = s0 + fw;
    const double in_s1 = s1 - fw;
    const double in_z0 = is_door(o.kind) ? z0 : z0 + fw;
    const double in_z1 = z1 - fw;
    const std::string prefix = is_door(o.kind) ? "door" : "window";
    const std::string suffix = "_" + std::to_string(k);

    const auto add_fixture = [&](const std::string& role, MeshBuilder& mb, const std::string& material) {
      const std::string id = prefix + "_" + role + suffix;
      room.meshes[id] = mb.finish();
      auto e = shell_element(id, Category::kWalls, material, materials);
      e.metadata["fixture"] = role;
      e.metadata["opening"] = std::to_string(k);
      e.metadata["wall_index"] = std::to_string(o.wall_index);
      e.metadata["opening_kind"] = std::string(to_string(o.kind));
      scene.elements[id] = std::move(e);
    };

    MeshBuilder frame;
    frame.wall_box(f, {s0, 0.0, z0}, {in_s0, kFrameDepth, z1});
    frame.wall_box(f, {in_s1, 0.0, z0}, {s1, kFrameDepth, z1});
    frame.wall_box(f, {in_s0, 0.0, in_z1}, {in_s1, kFrameDepth, z1});
    if (!is_door(o.kind)) frame.wall_box(f, {in_s0, 0.0, z0}, {in_s1, kFrameDepth, in_z0});
    add_fixture("frame", frame, o.materials.frame);

    MeshBuilder panel;
    MeshBuilder knob;
    const double knob_z = std::min(in_z0 + 0.95, 0.5 * (in_z0 + in_z1));
    const double mid = 0.5 * (in_s0 + in_s1);
    const double knob_size = std::min(0.04, 0.1 * (in_s1 - in_s0));
    const auto knob_at = [&](double s, double depth) {
      knob.wall_box(f, {s - 0.5 * knob_size, depth, knob_z - 0.5 * knob_size},
                    {s + 0.5 * knob_size, depth + 0.04, knob_z + 0.5 * knob_size});
    };
    switch (o.kind) {
      case OpeningKind::kSingleDoor:
        panel.wall_box(f, {in_s0, 0.015, in_z0}, {in_s1, 0.035, in_z1});
        knob_at(in_s1 - 2.0 * knob_size, 0.035);
        break;
      case OpeningKind::kDoubleDoor:
        panel.wall_box(f, {in_s0, 0.015, in_z0}, {mid, 0.035, in_z1});
        panel.wall_box(f, {mid, 0.015, in_z0}, {in_s1, 0.035, in_z1});
        knob_at(mid - 1.5 * knob_size, 0.035);
        knob_at(mid + 1.5 * knob_size, 0.035);
        break;
      case OpeningKind::kSlidingDoor: {
        // Panel runs proud of the frame, hung from a slab along the top of the opening.
        const double track_z1 = std::min(h, z1 + 0.06);
        const double track_z0 = track_z1 - 0.06;
        MeshBuilder track;
        track.wall_box(f, {s0, kFrameDepth, track_z0}, {s1, kFrameDepth + 0.04, track_z1});
        add_fixture("track", track, o.materials.frame);
        panel.wall_box(f, {in_s0, kFrameDepth + 0.01, in_z0}, {in_s1, kFrameDepth + 0.03, std::min(in_z1, track_z0)});
        knob_at(in_s1 - 2.0 * knob_size, kFrameDepth + 0.03);
        break;
      }
      case OpeningKind::kFoldingDoor: {
        const double fold = deg_to_rad(kFoldAngleDeg);
        panel.wall_box(f, {in_s0, 0.015, in_z0}, {mid, 0.035, in_z1}, fold, {in_s0, 0.015});
        panel.wall_box(f, {mid, 0.015, in_z0}, {in_s1, 0.035, in_z1}, -fold, {in_s1, 0.015});
        knob_at(mid, 0.035 + 0.5 * (mid - in_s0) * std::sin(fold));
        break;
      }
      case OpeningKind::kWindow:
        panel.wall_box(f, {in_s0, 0.02, in_z0}, {in_s1, 0.03, in_z1});
        break;
    }
    add_fixture(is_door(o.kind) ? "panel" : "glass", panel, o.materials.panel);
    if (is_door(o.kind) && o.materials.knob) add_fixture("knob", knob, *o.materials.knob);
  }

  scene.room = std::move(room);
  return scene;
}

RoomLayoutSpec layout_from_json(const json& j) {
  if (!j.is_object()) throw LayoutError("layout must be a JSON object");
  RoomLayoutSpec spec;
  try {
    const json poly = j.value("floor_polygon", json::array());
    for (std::size_t i = 0; i < poly.size(); ++i) {
      spec.floor_polygon.push_back(vec2_from_json(poly[i], "floor_polygon/" + std::to_string(i)));
    }
    spec.wall_height = number_from_json(j.value("wall_height", json()), "wall_height");
    const json mats = j.value("materials", json::object());
    spec.floor_material = mats.value("floors", "");
    spec.wall_material = mats.value("walls", "");
    spec.ceiling_material = mats.value("ceilings", "");
    spec.prompt = j.value("prompt", "");
    const json openings = j.value("openings", json::array());
    for (std::size_t i = 0; i < openings.size(); ++i) {
      const json& o = openings[i];
      const std::string path = "openings/" + std::to_string(i);
      Opening op;
      op.wall_index = static_cast<int>(number_from_json(o.value("wall_index", json()), path + "/wall_index"));
      op.offset = number_from_json(o.value("offset", json()), path + "/offset");
      op.width = number_from_json(o.value("width", json()), path + "/width");
      op.height = number_from_json(o.value("height", json()), path + "/height");
      op.sill = number_from_json(o.value("sill", json(0.0)), path + "/sill");
      const auto kind = parse_opening_kind(string_from_json(o.value("kind", json()), path + "/kind"));
      if (!kind) throw LayoutError("unknown opening kind at " + path + "/kind");
      op.kind = *kind;
      const json m = o.value("materials", json::object());
      op.materials.frame = m.value("frame", "");
      op.materials.panel = m.value("panel", "");
      if (m.contains("knob") && m["knob"].is_string()) op.materials.knob = m["knob"].get<std::string>();
      spec.openings.push_back(std::move(op));
    }
  } catch (const SceneFormatError& e) {
    throw LayoutError(std::string("layout: ") + e.what());
  } catch (const json::exception& e) {
    throw LayoutError(std::string("layout: ") + e.what());
  }
  return spec;
}

json layout_to_json(const RoomLayoutSpec& spec) {
  json poly = json::array();
  for (const auto& p : spec.floor_polygon) poly.push_back(vec_to_json(p));
  json openings = json::array();
  for (const auto& o : spec.openings) {
    json m{{"frame", o.materials.frame}, {"panel", o.materials.panel}};
    if (o.materials.knob) m["knob"] = *o.materials.knob;
    openings.push_back(json{{"wall_index", o.wall_index},
                            {"offset", number_to_json(o.offset)},
                            {"width", number_to_json(o.width)},
                            {"height", number_to_json(o.height)},
                            {"sill", number_to_json(o.sill)},
                            {"kind", std::string(to_string(o.kind))},
                            {"materials", std::move(m)}});
  }
  return json{{"floor_polygon", std::move(poly)},
              {"wall_height", number_to_json(spec.wall_height)},
              {"materials",
               {{"floors", spec.floor_material}, {"walls", spec.wall_material}, {"ceilings", spec.ceiling_material}}},
              {"openings", std::move(openings)},
              {"prompt", spec.prompt}};
}

}  // namespace scenegen
