#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "scenegen/action_lang.hpp"
#include "scenegen/asset_index.hpp"
#include "scenegen/posed.hpp"
#include "scenegen/scene.hpp"

namespace scenegen {

struct ExecutionContext {
  const AssetIndex* assets = nullptr;
  const MaterialIndex* materials = nullptr;
  /// Mesh lookup for collision and bounds gates; defaults to SceneMeshResolver(assets).
  const MeshSource* meshes = nullptr;
  bool collision_gate = true;  // false: collisions are logged but the edit is kept
  double collision_tol = 0.001;
  double bounds_tol = 0.01;
};

struct StatementOutcome {
  bool ok = false;
  std::string reason;  // why a statement was skipped, or a note on an applied one
};

struct ElementRef {
  std::string id;
  bool operator==(const ElementRef&) const = default;
};
struct LightRef {
  std::string id;
  bool operator==(const LightRef&) const = default;
};
using BindingValue = std::variant<MaterialAssignment, ElementRef, LightRef>;

struct ExecutionResult {
  Scene scene;
  std::vector<StatementOutcome> outcomes;  // one per statement
  std::map<std::string, BindingValue> bindings;

  std::size_t applied() const;
};

/// Applies statements in order to a copy of `scene`. A statement that fails is
/// logged as skipped and leaves the scene as it was; execution continues.
/// Throws Error only when the context lacks the indexes.
ExecutionResult execute(const ActionProgram& program, const Scene& scene, const ExecutionContext& ctx);

/// Word used for generated element ids: the last token of the description.
std::string id_stem(std::string_view description);

}  // namespace scenegen
