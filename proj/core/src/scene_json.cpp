#include "scenegen/scene_json.hpp"

#include <set>

#include "scenegen/errors.hpp"
#include "scenegen/io.hpp"

namespace scenegen {

using nlohmann::json;

json number_to_json(double value) { return round_significant(value, 9); }

json vec_to_json(const Vec3& v) {
  return json::array({number_to_json(v.x), number_to_json(v.y), number_to_json(v.z)});
}

json vec_to_json(const Vec2& v) { return json::array({number_to_json(v.x), number_to_json(v.y)}); }

double number_from_json(const json& j, const std::string& path) {
  if (!j.is_number()) throw SceneFormatError("expected number", path);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SceneFormatError("non-finite number", path);
  return v;
}

std::string string_from_json(const json& j, const std::string& path) {
  if (!j.is_string()) throw SceneFormatError("expected string", path);
  return j.get<std::string>();
}

Vec3 vec3_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw SceneFormatError("expected 3-vector", path);
  return {number_from_json(j[0], path), number_from_json(j[1], path), number_from_json(j[2], path)};
}

Vec2 vec2_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw SceneFormatError("expected 2-vector", path);
  return {number_from_json(j[0], path), number_from_json(j[1], path)};
}

json mesh_to_json(const TriangleMesh& mesh) {
  json verts = json::array();
  for (const auto& v : mesh.vertices()) verts.push_back(vec_to_json(v));
  json tris = json::array();
  for (const auto& t : mesh.triangles()) tris.push_back(json::array({t[0], t[1], t[2]}));
  return json{{"vertices", std::move(verts)}, {"triangles", std::move(tris)}};
}

TriangleMesh mesh_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("triangles")) {
    throw SceneFormatError("expected mesh object", path);
  }
  std::vector<Vec3> verts;
  for (std::size_t i = 0; i < j["vertices"].size(); ++i) {
    verts.push_back(vec3_from_json(j["vertices"][i], path + "/vertices/" + std::to_string(i)));
  }
  std::vector<Triangle> tris;
  for (std::size_t i = 0; i < j["triangles"].size(); ++i) {
    const auto& t = j["triangles"][i];
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_unsigned() || !t[1].is_number_unsigned() ||
        !t[2].is_number_unsigned()) {
      throw SceneFormatError("expected index triple", path + "/triangles/" + std::to_string(i));
    }
    tris.push_back({t[0].get<std::uint32_t>(), t[1].get<std::uint32_t>(), t[2].get<std::uint32_t>()});
  }
  try {
    return TriangleMesh(std::move(verts), std::move(tris));
  } catch (const GeometryError& e) {
    throw SceneFormatError(e.what(), path);
  }
}

namespace {

json placement_to_json(const Placement& p) {
  return json{{"position", vec_to_json(p.position)},
              {"rotation_z", number_to_json(p.rotation_z)},
              {"scale", vec_to_json(p.scale)}};
}

json element_to_json(const SceneElement& e) {
  json out{{"category", std::string(to_string(e.category))}};
  if (!e.asset_ref.empty()) out["asset_ref"] = e.asset_ref;
  if (!e.mesh_ref.empty()) out["mesh_ref"] = e.mesh_ref;
  json placements = json::array();
  for (const auto& p : e.placements) placements.push_back(placement_to_json(p));
  out["placements"] = std::move(placements);
  if (e.material) {
    out["material"] = json{{"description", e.material->description}, {"resolved_id", e.material->resolved_id}};
  }
  out["metadata"] = json::object();
  for (const auto& [k, v] : e.metadata) out["metadata"][k] = v;
  return out;
}

json light_to_json(const Light& l) {
  json out{{"kind", std::string(to_string(l.kind))},
           {"intensity", number_to_json(l.intensity)},
           {"color", vec_to_json(l.color)}};
  if (l.position) out["position"] = vec_to_json(*l.position);
  if (l.direction) out["direction"] = vec_to_json(*l.direction);
  if (l.extent) out["extent"] = vec_to_json(*l.extent);
  return out;
}

Placement placement_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SceneFormatError("expected placement object", path);
  Placement p;
  p.position = vec3_from_json(j.value("position", json()), path + "/position");
  p.rotation_z = normalize_angle(number_from_json(j.value("rotation_z", json(0.0)), path + "/rotation_z"));
  p.scale = vec3_from_json(j.value("scale", json::array({1.0, 1.0, 1.0})), path + "/scale");
  if (!(p.scale.x > 0.0 && p.scale.y > 0.0 && p.scale.z > 0.0)) {
    throw SceneFormatError("non-positive scale", path + "/scale");
  }
  return p;
}

SceneElement element_from_json(const std::string& id, const json& j, const std::string& path) {
  if (!j.is_object()) throw SceneFormatError("expected element object", path);
  SceneElement e;
  e.id = id;
  const auto cat = parse_category(string_from_json(j.value("category", json()), path + "/category"));
  if (!cat) throw SceneFormatError("unknown category", path + "/category");
  e.category = *cat;
  if (j.contains("asset_ref")) e.asset_ref = string_from_json(j["asset_ref"], path + "/asset_ref");
  if (j.contains("mesh_ref")) e.mesh_ref = string_from_json(j["mesh_ref"], path + "/mesh_ref");
  const json placements = j.value("placements", json());
  if (!placements.is_array()) throw SceneFormatError("expected placement list", path + "/placements");
  for (std::size_t i = 0; i < placements.size(); ++i) {
    e.placements.push_back(placement_from_json(placements[i], path + "/placements/" + std::to_string(i)));
  }
  if (j.contains("material") && !j["material"].is_null()) {
    const json& m = j["material"];
    MaterialAssignment ma;
    ma.description = string_from_json(m.value("description", json()), path + "/material/description");
    ma.resolved_id = string_from_json(m.value("resolved_id", json("")), path + "/material/resolved_id");
    e.material = std::move(ma);
  }
  if (j.contains("metadata")) {
    const json& md = j["metadata"];
    if (!md.is_object()) throw SceneFormatError("expected metadata object", path + "/metadata");
    for (const auto& [k, v] : md.items()) e.metadata[k] = string_from_json(v, path + "/metadata/" + k);
  }
  validate_element(e, path);
  return e;
}

Light light_from_json(const std::string& id, const json& j, const std::string& path) {
  if (!j.is_object()) throw SceneFormatError("expected light object", path);
  Light l;
  l.id = id;
  const auto kind = parse_light_kind(string_from_json(j.value("kind", json()), path + "/kind"));
  if (!kind) throw SceneFormatError("unknown light kind", path + "/kind");
  l.kind = *kind;
  l.intensity = number_from_json(j.value("intensity", json()), path + "/intensity");
  l.color = vec3_from_json(j.value("color", json()), path + "/color");
  if (j.contains("position")) l.position = vec3_from_json(j["position"], path + "/position");
  if (j.contains("direction")) l.direction = vec3_from_json(j["direction"], path + "/direction");
  if (j.contains("extent")) l.extent = vec2_from_json(j["extent"], path + "/extent");
  validate_light(l, path);
  return l;
}

}  // namespace

json scene_to_json(const Scene& scene) {
  json out;
  out["prompt"] = scene.prompt;
  if (scene.bounds.empty()) {
    out["bounds"] = nullptr;
  } else {
    out["bounds"] = json{{"min", vec_to_json(scene.bounds.min)}, {"max", vec_to_json(scene.bounds.max)}};
  }
  out["elements"] = json::object();
  for (const auto& [id, e] : scene.elements) out["elements"][id] = element_to_json(e);
  out["lights"] = json::object();
  for (const auto& [id, l] : scene.lights) out["lights"][id] = light_to_json(l);
  if (scene.room) {
    json poly = json::array();
    for (const auto& p : scene.room->floor_polygon) poly.push_back(vec_to_json(p));
    json meshes = json::object();
    for (const auto& [name, mesh] : scene.room->meshes) meshes[name] = mesh_to_json(*mesh);
    out["room"] = json{{"floor_polygon", std::move(poly)},
                       {"wall_height", number_to_json(scene.room->wall_height)},
                       {"meshes", std::move(meshes)}};
  }
  return out;
}

std::string serialize_scene(const Scene& scene) { return scene_to_json(scene).dump(); }

Scene scene_from_json(const json& doc) {
  if (!doc.is_object()) throw SceneFormatError("expected scene object", "/");
  Scene scene;
  scene.prompt = string_from_json(doc.value("prompt", json("")), "prompt");
  if (doc.contains("bounds") && !doc["bounds"].is_null()) {
    const json& b = doc["bounds"];
    scene.bounds.min = vec3_from_json(b.value("min", json()), "bounds/min");
    scene.bounds.max = vec3_from_json(b.value("max", json()), "bounds/max");
  }
  if (doc.contains("room") && !doc["room"].is_null()) {
    const json& r = doc["room"];
    RoomShell room;
    const json polygon = r.value("floor_polygon", json::array());
    for (std::size_t i = 0; i < polygon.size(); ++i) {
      room.floor_polygon.push_back(vec2_from_json(polygon[i], "room/floor_polygon/" + std::to_string(i)));
    }
    room.wall_height = number_from_json(r.value("wall_height", json(0.0)), "room/wall_height");
    const json meshes = r.value("meshes", json::object());
    for (const auto& [name, m] : meshes.items()) {
      room.meshes[name] = std::make_shared<const TriangleMesh>(mesh_from_json(m, "room/meshes/" + name));
    }
    scene.room = std::move(room);
  }
  const json elements = doc.value("elements", json::object());
  if (!elements.is_object()) throw SceneFormatError("expected element map", "elements");
  for (const auto& [id, e] : elements.items()) {
    scene.elements.emplace(id, element_from_json(id, e, "elements/" + id));
  }
  const json lights = doc.value("lights", json::object());
  if (!lights.is_object()) throw SceneFormatError("expected light map", "lights");
  for (const auto& [id, l] : lights.items()) {
    scene.lights.emplace(id, light_from_json(id, l, "lights/" + id));
  }
  validate_scene(scene);
  return scene;
}

json parse_json_strict(std::string_view text) {
  struct Frame {
    bool is_object = false;
    std::string key;
    std::set<std::string> seen;
  };
  std::vector<Frame> stack;
  std::string duplicate_path;
  auto callback = [&](int /*depth*/, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        stack.push_back({true, {}, {}});
        break;
      case json::parse_event_t::array_start:
        stack.push_back({false, {}, {}});
        break;
      case json::parse_event_t::object_end:
      case json::parse_event_t::array_end:
        if (!stack.empty()) stack.pop_back();
        break;
      case json::parse_event_t::key: {
        auto& top = stack.back();
        const auto key = parsed.get<std::string>();
        if (!top.seen.insert(key).second && duplicate_path.empty()) {
          for (const auto& f : stack) {
            if (f.is_object && &f != &top) duplicate_path += f.key + "/";
          }
          duplicate_path += key;
        }
        top.key = key;
        break;
      }
      case json::parse_event_t::value:
        break;
    }
    return true;
  };
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), callback);
  } catch (const json::parse_error& e) {
    throw SceneFormatError(std::string("malformed JSON: ") + e.what(), "/");
  }
  if (!duplicate_path.empty()) throw SceneFormatError("duplicate id", duplicate_path);
  return doc;
}

Scene deserialize_scene(std::string_view text) { return scene_from_json(parse_json_strict(text)); }

}  // namespace scenegen
