#include "scenegen/policy.hpp"

#include <cmath>
#include <sstream>

#include "scenegen/errors.hpp"
#include "scenegen/io.hpp"
#include "scenegen/scene_json.hpp"

namespace scenegen {

using nlohmann::json;

ScriptedPolicy::ScriptedPolicy(std::vector<std::string> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error(ErrorKind::kInvalidInput, "scripted policy has no blocks");
}

ScriptedPolicy ScriptedPolicy::parse(std::string_view text) {
  std::vector<std::string> blocks(1);
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string trimmed = line;
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' ')) trimmed.pop_back();
    if (trimmed == "---") {
      blocks.emplace_back();
      continue;
    }
    blocks.back() += line + "\n";
  }
  return ScriptedPolicy(std::move(blocks));
}

ScriptedPolicy ScriptedPolicy::load(const std::filesystem::path& path) { return parse(read_text_file(path)); }

std::string ScriptedPolicy::act(const ActRequest& request) {
  const auto n = static_cast<long long>(blocks_.size());
  const long long k = static_cast<long long>(request.step) * request.candidates + request.sample_index;
  return blocks_[static_cast<std::size_t>(((k % n) + n) % n)];
}

ScriptedPlacementPolicy::ScriptedPlacementPolicy(std::vector<ScriptedPlacement> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorKind::kInvalidInput, "scripted placement policy has no entries");
}

ScriptedPlacementPolicy ScriptedPlacementPolicy::parse(std::string_view text) {
  std::vector<ScriptedPlacement> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kInvalidInput, "placement script " + where + ": " + e.what());
    }
    ScriptedPlacement p;
    p.description = string_from_json(j.value("description", json()), where + "/description");
    if (j.contains("pixel")) {
      const Vec2 px = vec2_from_json(j["pixel"], where + "/pixel");
      p.pixel = Pixel{static_cast<int>(px.x), static_cast<int>(px.y)};
    } else if (j.contains("world") && j["world"].is_array() && j["world"].size() == 2) {
      p.column = vec2_from_json(j["world"], where + "/world");
    } else if (j.contains("world")) {
      p.world = vec3_from_json(j["world"], where + "/world");
    } else {
      throw Error(ErrorKind::kInvalidInput, "placement script " + where + ": needs pixel or world");
    }
    entries.push_back(std::move(p));
  }
  return ScriptedPlacementPolicy(std::move(entries));
}

ScriptedPlacementPolicy ScriptedPlacementPolicy::load(const std::filesystem::path& path) {
  return parse(read_text_file(path));
}

const ScriptedPlacement& ScriptedPlacementPolicy::entry(const PlacementRequest& request) const {
  return entries_[static_cast<std::size_t>(request.successes) % entries_.size()];
}

std::string ScriptedPlacementPolicy::describe(const PlacementRequest& request) { return entry(request).description; }

Pixel ScriptedPlacementPolicy::locate(const PlacementRequest& request, const std::string&) {
  const auto& e = entry(request);
  if (e.pixel) return *e.pixel;
  if (request.camera == nullptr) throw BackendError("scripted world target needs the round camera");
  Vec3 target;
  if (e.world) {
    target = *e.world;
  } else {
    if (request.geometry == nullptr) throw BackendError("scripted column target needs the round geometry");
    const double top = request.geometry->bounds().max.z + 1.0;
    const auto hit = request.geometry->cast({{e.column->x, e.column->y, top}, {0.0, 0.0, -1.0}});
    if (!hit) throw BackendError("nothing below scripted column target");
    target = hit->point;
  }
  const auto img = project(*request.camera, target);
  const auto px = img ? to_pixel(*request.camera, *img) : std::nullopt;
  if (!px) throw BackendError("scripted target outside the round view");
  return *px;
}

}  // namespace scenegen
