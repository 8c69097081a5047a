#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scenegen/asset_index.hpp"
#include "scenegen/camera.hpp"
#include "scenegen/policy.hpp"
#include "scenegen/posed.hpp"
#include "scenegen/surfaces.hpp"

namespace scenegen {

/// Decides whether an asset can host smaller items.
class ReceptacleGate {
 public:
  virtual ~ReceptacleGate() = default;
  virtual bool is_receptacle(const AssetRecord* record, const TriangleMesh& mesh) const = 0;
};

/// Default gate: some surface of at least min_area lies at least min_height
/// above the mesh's lowest point.
class GeometricReceptacleGate final : public ReceptacleGate {
 public:
  double min_area = 0.01;
  double min_height = 0.1;
  SurfaceOptions surfaces;

  bool is_receptacle(const AssetRecord* record, const TriangleMesh& mesh) const override;
};

bool is_receptacle(const TriangleMesh& mesh);

struct AssetLoopConfig {
  std::uint64_t seed = 0;
  int max_placements = 10;
  int max_attempts = 30;
  int width = 256;
  int height = 256;
  double vertical_fov_deg = 60.0;
  double radius_factor = 2.2;
  double min_elevation_deg = 15.0;
  double max_elevation_deg = 75.0;
  SurfaceOptions surfaces;
  double membership_z_tol = 0.01;
  double collision_tol = 0.001;
  double bounds_tol = 0.01;
};

struct PlacementRound {
  int round = 0;
  Camera camera;
  std::string description;
  std::optional<Pixel> pixel;
  bool success = false;
  std::string reason;      // failure cause
  std::string element_id;  // placed element on success
  std::string support;     // owner of the supporting surface
  std::optional<Vec3> hit;
};

struct AssetLoopResult {
  Scene scene;
  std::vector<PlacementRound> rounds;
  int successes = 0;
};

/// Camera on the upper hemisphere around a box: azimuth in [0, 2π), elevation
/// in the configured band, distance radius_factor × half-diagonal.
Camera sample_orbit_camera(const Aabb& box, const AssetLoopConfig& config, std::uint64_t round_seed);

/// Repeatedly asks the policy for an object and a pixel on the receptacle (or
/// on items already placed by this loop), drops the retrieved asset onto the
/// surface under that pixel and keeps it when it neither collides nor leaves
/// the scene bounds. Stops after max_placements successes or max_attempts rounds.
/// Throws Error when the receptacle is missing or fails the gate.
AssetLoopResult run_asset_loop(const Scene& scene, const std::string& receptacle_id, const std::string& prompt,
                               PlacementPolicy& policy, const AssetIndex& assets, const AssetLoopConfig& config,
                               const ReceptacleGate* gate = nullptr);

nlohmann::json round_to_json(const PlacementRound& round);

}  // namespace scenegen
