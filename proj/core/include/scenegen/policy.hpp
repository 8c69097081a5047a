#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenegen/camera.hpp"
#include "scenegen/raycast.hpp"
#include "scenegen/render.hpp"

namespace scenegen {

struct InContextExample {
  std::string prompt;
  std::string action_text;
};

struct ActRequest {
  std::string prompt;
  int step = 0;
  int sample_index = 0;
  int candidates = 1;  // candidates sampled per step
  const ViewSet* views = nullptr;
  nlohmann::json scene_summary;
  std::vector<InContextExample> in_context;
};

/// Scene-level policy: proposes an action program. Throws BackendError on failure.
/// Must be safe to call concurrently for different sample indices.
class PolicyBackend {
 public:
  virtual ~PolicyBackend() = default;
  virtual std::string act(const ActRequest& request) = 0;
};

/// Action-program blocks separated by `---` lines; the block for a request is
/// (step * candidates + sample_index) modulo the block count.
class ScriptedPolicy final : public PolicyBackend {
 public:
  explicit ScriptedPolicy(std::vector<std::string> blocks);
  static ScriptedPolicy parse(std::string_view text);
  static ScriptedPolicy load(const std::filesystem::path& path);

  std::string act(const ActRequest& request) override;
  const std::vector<std::string>& blocks() const { return blocks_; }

 private:
  std::vector<std::string> blocks_;
};

struct PlacementRequest {
  std::string prompt;
  nlohmann::json receptacle_summary;
  int round = 0;
  int successes = 0;
  const View* view = nullptr;
  const Camera* camera = nullptr;
  /// Geometry rendered this round, available to in-process policies.
  const MeshSet* geometry = nullptr;
};

/// Asset-level policy: names an object to place, then points at a pixel for it.
class PlacementPolicy {
 public:
  virtual ~PlacementPolicy() = default;
  virtual std::string describe(const PlacementRequest& request) = 0;
  virtual Pixel locate(const PlacementRequest& request, const std::string& description) = 0;
};

/// One entry per successful placement (cycling). An entry targets either a
/// pixel of the round's view, a world point projected into the round's camera,
/// or an (x, y) column whose topmost geometry is projected.
struct ScriptedPlacement {
  std::string description;
  std::optional<Pixel> pixel;
  std::optional<Vec3> world;
  std::optional<Vec2> column;
};

class ScriptedPlacementPolicy final : public PlacementPolicy {
 public:
  explicit ScriptedPlacementPolicy(std::vector<ScriptedPlacement> entries);
  /// JSONL lines {description, pixel:[u,v]} | {description, world:[x,y,z]} | {description, world:[x,y]}.
  static ScriptedPlacementPolicy parse(std::string_view text);
  static ScriptedPlacementPolicy load(const std::filesystem::path& path);

  std::string describe(const PlacementRequest& request) override;
  Pixel locate(const PlacementRequest& request, const std::string& description) override;

 private:
  const ScriptedPlacement& entry(const PlacementRequest& request) const;
  std::vector<ScriptedPlacement> entries_;
};

}  // namespace scenegen
