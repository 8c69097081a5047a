#pragma once

#include <nlohmann/json.hpp>

#include "scenegen/scene.hpp"

namespace scenegen {

class AssetIndex;

/// Compact, policy-facing description of a scene: bounds, each element with its
/// category, description, pose and material, and the lights.
nlohmann::json scene_summary(const Scene& scene, const AssetIndex* assets = nullptr);

/// Summary of one element (used for the receptacle in the asset loop).
nlohmann::json element_summary(const Scene& scene, const std::string& element_id, const AssetIndex* assets = nullptr);

}  // namespace scenegen
