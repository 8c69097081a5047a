#include "scenegen/summary.hpp"

#include "scenegen/asset_index.hpp"
#include "scenegen/scene_json.hpp"

namespace scenegen {

using nlohmann::json;

namespace {

json summarize(const SceneElement& e, const AssetIndex* assets) {
  json j;
  j["category"] = std::string(to_string(e.category));
  if (!e.asset_ref.empty()) {
    j["asset"] = e.asset_ref;
    const AssetRecord* r = assets ? assets->find(e.asset_ref) : nullptr;
    if (r) {
      j["description"] = r->description;
    } else if (auto it = e.metadata.find("description"); it != e.metadata.end()) {
      j["description"] = it->second;
    }
  }
  json placements = json::array();
  for (const auto& p : e.placements) {
    placements.push_back(json{{"position", vec_to_json(p.position)},
                              {"rotation_z", number_to_json(p.rotation_z)},
                              {"scale", vec_to_json(p.scale)}});
  }
  j["placements"] = std::move(placements);
  if (e.material) j["material"] = e.material->description;
  return j;
}

}  // namespace

json element_summary(const Scene& scene, const std::string& element_id, const AssetIndex* assets) {
  json j = summarize(scene.elements.at(element_id), assets);
  j["id"] = element_id;
  return j;
}

json scene_summary(const Scene& scene, const AssetIndex* assets) {
  json j;
  j["prompt"] = scene.prompt;
  if (scene.bounds.empty()) {
    j["bounds"] = nullptr;
  } else {
    j["bounds"] = json{{"min", vec_to_json(scene.bounds.min)}, {"max", vec_to_json(scene.bounds.max)}};
  }
  json elements = json::object();
  for (const auto& [id, e] : scene.elements) elements[id] = summarize(e, assets);
  j["elements"] = std::move(elements);
  json lights = json::object();
  for (const auto& [id, l] : scene.lights) {
    json lj{{"kind", std::string(to_string(l.kind))},
            {"intensity", number_to_json(l.intensity)},
            {"color", vec_to_json(l.color)}};
    if (l.position) lj["position"] = vec_to_json(*l.position);
    if (l.direction) lj["direction"] = vec_to_json(*l.direction);
    lights[id] = std::move(lj);
  }
  j["lights"] = std::move(lights);
  return j;
}

}  // namespace scenegen
