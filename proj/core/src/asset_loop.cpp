#include "scenegen/asset_loop.hpp"

#include <cmath>

#include "scenegen/collision.hpp"
#include "scenegen/errors.hpp"
#include "scenegen/interpreter.hpp"
#include "scenegen/render.hpp"
#include "scenegen/rng.hpp"
#include "scenegen/scene_json.hpp"
#include "scenegen/summary.hpp"
#include "scenegen/verify.hpp"

namespace scenegen {

using nlohmann::json;

bool GeometricReceptacleGate::is_receptacle(const AssetRecord*, const TriangleMesh& mesh) const {
  if (mesh.empty()) return false;
  const double floor_z = mesh.bounds().min.z;
  for (const auto& s : detect_placeable_surfaces(mesh, surfaces)) {
    if (s.area >= min_area && s.height_z - floor_z >= min_height) return true;
  }
  return false;
}

bool is_receptacle(const TriangleMesh& mesh) { return GeometricReceptacleGate{}.is_receptacle(nullptr, mesh); }

Camera sample_orbit_camera(const Aabb& box, const AssetLoopConfig& config, std::uint64_t round_seed) {
  Rng rng(round_seed);
  const double azimuth = rng.uniform(0.0, kTwoPi);
  const double elevation = deg_to_rad(rng.uniform(config.min_elevation_deg, config.max_elevation_deg));
  const double radius = config.radius_factor * 0.5 * length(box.extent());
  Camera cam;
  cam.look_at = box.center();
  cam.position = cam.look_at + Vec3{std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth),
                                    std::sin(elevation)} * radius;
  cam.vertical_fov = deg_to_rad(config.vertical_fov_deg);
  cam.width = config.width;
  cam.height = config.height;
  return cam;
}

json round_to_json(const PlacementRound& r) {
  json j{{"round", r.round},
         {"camera", camera_to_json(r.camera)},
         {"description", r.description},
         {"success", r.success},
         {"reason", r.reason},
         {"element_id", r.element_id},
         {"support", r.support}};
  j["pixel"] = r.pixel ? json{r.pixel->u, r.pixel->v} : json();
  j["hit"] = r.hit ? vec_to_json(*r.hit) : json();
  return j;
}

namespace {

bool rendered_category(const SceneElement& e) {
  return e.category == Category::kFloors || e.category == Category::kObjects;
}

}  // namespace

AssetLoopResult run_asset_loop(const Scene& scene, const std::string& receptacle_id, const std::string& prompt,
                               PlacementPolicy& policy, const AssetIndex& assets, const AssetLoopConfig& config,
                               const ReceptacleGate* gate) {
  const auto it = scene.elements.find(receptacle_id);
  if (it == scene.elements.end()) throw Error(ErrorKind::kInvalidInput, "unknown receptacle " + receptacle_id);
  const SceneMeshResolver meshes(&assets);
  const auto local = meshes.local_mesh(scene, it->second);
  if (!local) throw UnresolvedMeshError(receptacle_id);
  const GeometricReceptacleGate default_gate;
  const ReceptacleGate& g = gate ? *gate : default_gate;
  if (!g.is_receptacle(assets.find(it->second.asset_ref), *local)) {
    throw Error(ErrorKind::kInvalidInput, receptacle_id + " is not a receptacle");
  }

  AssetLoopResult result;
  result.scene = scene;
  Scene& current = result.scene;
  const Aabb receptacle_box = posed_instance(current, meshes, it->second, 0).mesh.bounds();
  std::vector<std::string> supports{receptacle_id};

  for (int round = 0; round < config.max_attempts && result.successes < config.max_placements; ++round) {
    PlacementRound log;
    log.round = round;
    log.camera = sample_orbit_camera(receptacle_box, config, derive_seed({config.seed, static_cast<std::uint64_t>(round)}));

    const SceneRenderer renderer(current, meshes, rendered_category);
    View view{"orbit", log.camera, renderer.render(log.camera), make_instance_labels(current, meshes, log.camera)};

    std::vector<PlaceableSurface> surfaces;
    for (const auto& owner : supports) {
      const auto& e = current.elements.at(owner);
      for (std::size_t p = 0; p < e.placements.size(); ++p) {
        for (auto s : detect_placeable_surfaces(posed_instance(current, meshes, e, p).mesh, config.surfaces)) {
          s.owner = owner;
          surfaces.push_back(std::move(s));
        }
      }
    }

    PlacementRequest req;
    req.prompt = prompt;
    req.receptacle_summary = element_summary(current, receptacle_id, &assets);
    req.round = round;
    req.successes = result.successes;
    req.view = &view;
    req.camera = &log.camera;
    req.geometry = &renderer.meshes();

    const auto fail = [&](std::string reason) {
      log.reason = std::move(reason);
      result.rounds.push_back(log);
    };

    try {
      log.description = policy.describe(req);
      log.pixel = policy.locate(req, log.description);
    } catch (const Error& e) {
      fail(std::string("policy failure: ") + e.what());
      continue;
    }
    const Pixel px = *log.pixel;
    if (px.u < 0 || px.v < 0 || px.u >= log.camera.width || px.v >= log.camera.height) {
      fail("pixel outside view");
      continue;
    }
    const auto hit = renderer.meshes().cast(pixel_to_ray(log.camera, px));
    if (!hit) {
      fail("no hit");
      continue;
    }
    log.hit = hit->point;
    const auto surface = surface_membership(surfaces, hit->point, 0.0, config.membership_z_tol);
    if (!surface) {
      fail("off surface");
      continue;
    }
    const auto found = assets.retrieve(log.description, 1);
    if (found.empty()) {
      fail("retrieval miss");
      continue;
    }
    const auto mesh = assets.mesh(found.front().id);
    if (!mesh || mesh->empty()) {
      fail("asset has no mesh");
      continue;
    }

    SceneElement item;
    item.id = next_free_id(current, id_stem(log.description));
    item.category = Category::kObjects;
    item.asset_ref = found.front().id;
    item.metadata["description"] = log.description;
    item.metadata["support"] = surfaces[*surface].owner;
    Placement p;
    p.position = {hit->point.x, hit->point.y, surfaces[*surface].height_z - mesh->bounds().min.z};
    item.placements.push_back(p);

    const auto posed = posed_instance(current, meshes, item, 0);
    if (!current.bounds.empty() && bounds_excess(current.bounds, posed.mesh.bounds(), config.bounds_tol) > 0.0) {
      fail("out of bounds");
      continue;
    }
    const auto others = posed_meshes(current, meshes, is_object);
    const auto report = check_collision(posed, others, config.collision_tol);
    if (report.colliding()) {
      fail("collision with " + report.contacts.front().element_id);
      continue;
    }

    log.success = true;
    log.element_id = item.id;
    log.support = surfaces[*surface].owner;
    supports.push_back(item.id);
    current.elements[item.id] = std::move(item);
    ++result.successes;
    result.rounds.push_back(log);
  }
  return result;
}

}  // namespace scenegen
