#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "scenegen/asset_index.hpp"
#include "scenegen/mesh.hpp"
#include "scenegen/policy.hpp"
#include "scenegen/rng.hpp"
#include "scenegen/room_builder.hpp"
#include "scenegen/scene.hpp"

namespace fixtures {

std::filesystem::path data_dir();
std::filesystem::path demo_dir();

const scenegen::AssetIndex& demo_assets();
const scenegen::MaterialIndex& demo_materials();

/// The 4 × 5 × 2.8 demo room built from demo/layout.json.
scenegen::Scene demo_room();
/// Demo room with the dining table (id "dining_table") at the origin.
scenegen::Scene table_scene();

/// Element referencing a demo asset at a floor position (bottom at z).
scenegen::SceneElement object_at(const std::string& id, const std::string& asset, scenegen::Vec3 position,
                                 double rotation = 0.0);

scenegen::TriangleMesh rotate_x(const scenegen::TriangleMesh& mesh, double degrees);
scenegen::TriangleMesh table_mesh(double w, double d, double h, double top, double leg);
scenegen::TriangleMesh bookcase_mesh(double w, double d, const std::vector<double>& shelf_tops, double board);

struct Receptacle {
  std::string name;
  scenegen::TriangleMesh mesh;
};

/// 20 synthetic receptacles: cubes, tables, bookcases and tilted variants.
std::vector<Receptacle> receptacle_corpus();

/// Simple counterclockwise star-shaped polygon with 3–8 vertices and 0–4 valid openings.
scenegen::RoomLayoutSpec random_layout(scenegen::Rng& rng);

/// Names `description`, then scans the round's view for the pixel whose hit
/// lies on the plane z = target.z (within 1 mm) closest to target in xy.
/// Throws BackendError when no such pixel is within max_dist.
class NearestHitPolicy final : public scenegen::PlacementPolicy {
 public:
  NearestHitPolicy(std::string description, scenegen::Vec3 target, double max_dist)
      : description_(std::move(description)), target_(target), max_dist_(max_dist) {}
  std::string describe(const scenegen::PlacementRequest&) override { return description_; }
  scenegen::Pixel locate(const scenegen::PlacementRequest& request, const std::string&) override;

 private:
  std::string description_;
  scenegen::Vec3 target_;
  double max_dist_;
};

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& name);

}  // namespace fixtures
