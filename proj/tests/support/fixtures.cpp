#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "scenegen/errors.hpp"
#include "scenegen/io.hpp"
#include "scenegen/scene_json.hpp"

namespace fixtures {

using namespace scenegen;

std::filesystem::path data_dir() { return SCENEGEN_TEST_DATA_DIR; }
std::filesystem::path demo_dir() { return data_dir() / "demo"; }

const AssetIndex& demo_assets() {
  static const AssetIndex index = AssetIndex::load(demo_dir() / "assets.jsonl");
  return index;
}

const MaterialIndex& demo_materials() {
  static const MaterialIndex index = MaterialIndex::load(demo_dir() / "materials.jsonl");
  return index;
}

Scene demo_room() {
  const auto spec = layout_from_json(parse_json_strict(read_text_file(demo_dir() / "layout.json")));
  return build_room(spec, &demo_materials());
}

SceneElement object_at(const std::string& id, const std::string& asset, Vec3 position, double rotation) {
  SceneElement e;
  e.id = id;
  e.category = Category::kObjects;
  e.asset_ref = asset;
  Placement p;
  p.position = position;
  p.rotation_z = rotation;
  e.placements.push_back(p);
  return e;
}

Scene table_scene() {
  Scene s = demo_room();
  s.elements["dining_table"] = object_at("dining_table", "dining_table", {0.0, 0.0, 0.0});
  return s;
}

TriangleMesh rotate_x(const TriangleMesh& mesh, double degrees) {
  const double a = degrees * kPi / 180.0;
  std::vector<Vec3> v;
  for (const auto& p : mesh.vertices()) {
    v.push_back({p.x, std::cos(a) * p.y - std::sin(a) * p.z, std::sin(a) * p.y + std::cos(a) * p.z});
  }
  return TriangleMesh(std::move(v), mesh.triangles());
}

TriangleMesh table_mesh(double w, double d, double h, double top, double leg) {
  std::vector<TriangleMesh> parts;
  parts.push_back(make_box({-w / 2, -d / 2, h - top}, {w / 2, d / 2, h}));
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      const double x0 = sx < 0 ? -w / 2 + 0.02 : w / 2 - 0.02 - leg;
      const double y0 = sy < 0 ? -d / 2 + 0.02 : d / 2 - 0.02 - leg;
      parts.push_back(make_box({x0, y0, 0.0}, {x0 + leg, y0 + leg, h - top}));
    }
  }
  return TriangleMesh::merge(parts);
}

TriangleMesh bookcase_mesh(double w, double d, const std::vector<double>& shelf_tops, double board) {
  const double side = 0.005;  // thin enough that the side tops stay under the minimum area
  const double height = shelf_tops.back() + 0.1;
  std::vector<TriangleMesh> parts;
  parts.push_back(make_box({-w / 2 - side, -d / 2, 0.0}, {-w / 2, d / 2, height}));
  parts.push_back(make_box({w / 2, -d / 2, 0.0}, {w / 2 + side, d / 2, height}));
  for (double z : shelf_tops) parts.push_back(make_box({-w / 2, -d / 2, z - board}, {w / 2, d / 2, z}));
  return TriangleMesh::merge(parts);
}

std::vector<Receptacle> receptacle_corpus() {
  std::vector<Receptacle> out;
  for (double s : {0.1, 0.3, 0.5, 0.75, 1.2}) {
    out.push_back({"cube " + std::to_string(s), make_box({-s / 2, -s / 2, 0.0}, {s / 2, s / 2, s})});
  }
  out.push_back({"table 1.2x0.8", table_mesh(1.2, 0.8, 0.75, 0.04, 0.04)});
  out.push_back({"table 0.6x0.6", table_mesh(0.6, 0.6, 0.5, 0.03, 0.035)});
  out.push_back({"table 2.0x1.0", table_mesh(2.0, 1.0, 0.76, 0.05, 0.045)});
  out.push_back({"table 0.9x0.45", table_mesh(0.9, 0.45, 0.7, 0.02, 0.03)});
  out.push_back({"table 1.6x0.9", table_mesh(1.6, 0.9, 0.9, 0.06, 0.04)});
  out.push_back({"bookcase 0.8x0.3", bookcase_mesh(0.8, 0.3, {0.1, 0.6, 1.1}, 0.02)});
  out.push_back({"bookcase 1.0x0.35", bookcase_mesh(1.0, 0.35, {0.05, 0.45, 0.85}, 0.025)});
  out.push_back({"bookcase 0.6x0.25", bookcase_mesh(0.6, 0.25, {0.2, 0.7, 1.5}, 0.018)});
  out.push_back({"bookcase 1.2x0.4", bookcase_mesh(1.2, 0.4, {0.08, 0.9, 1.7}, 0.03)});
  out.push_back({"bookcase 0.5x0.2", bookcase_mesh(0.5, 0.2, {0.3, 0.65, 1.0}, 0.02)});
  const TriangleMesh cube = make_box({-0.25, -0.25, 0.0}, {0.25, 0.25, 0.5});
  out.push_back({"cube tilted 15", rotate_x(cube, 15.0)});
  out.push_back({"cube tilted 12", rotate_x(cube, 12.0)});
  out.push_back({"cube tilted 0.3", rotate_x(cube, 0.3)});
  out.push_back({"table tilted 15", rotate_x(table_mesh(1.2, 0.8, 0.75, 0.04, 0.04), 15.0)});
  out.push_back({"bookcase tilted 20", rotate_x(bookcase_mesh(0.8, 0.3, {0.1, 0.6, 1.1}, 0.02), 20.0)});
  return out;
}

RoomLayoutSpec random_layout(Rng& rng) {
  RoomLayoutSpec spec;
  const int n = 3 + static_cast<int>(rng.index(6));
  // Sorted angles with a minimum gap keep the star polygon simple and counterclockwise.
  std::vector<double> angles;
  const double slot = kTwoPi / n;
  for (int i = 0; i < n; ++i) angles.push_back(slot * (i + rng.uniform(0.15, 0.85)));
  for (double a : angles) {
    const double r = rng.uniform(2.0, 5.0);
    spec.floor_polygon.push_back({r * std::cos(a), r * std::sin(a)});
  }
  spec.wall_height = rng.uniform(2.2, 3.5);
  spec.floor_material = "dark oak planks";
  spec.wall_material = "white painted plaster";
  spec.ceiling_material = "white painted plaster";
  const int openings = static_cast<int>(rng.index(5));
  std::set<std::pair<int, int>> used;
  for (int k = 0; k < openings; ++k) {
    const int wall = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    const Vec2 a = spec.floor_polygon[wall];
    const Vec2 b = spec.floor_polygon[(wall + 1) % n];
    const double len = length(b - a);
    // Split each wall into 4 slots so openings on one wall never overlap.
    const int slot_index = static_cast<int>(rng.index(4));
    const double slot_len = len / 4.0;
    if (!used.insert({wall, slot_index}).second) continue;
    Opening o;
    o.wall_index = wall;
    o.offset = slot_index * slot_len + 0.1 * slot_len;
    o.width = slot_len * rng.uniform(0.3, 0.8);
    o.kind = static_cast<OpeningKind>(rng.index(5));
    if (is_door(o.kind)) {
      o.sill = 0.0;
      o.height = spec.wall_height * rng.uniform(0.6, 0.9);
    } else {
      o.sill = rng.uniform(0.5, 1.0);
      o.height = (spec.wall_height - o.sill) * rng.uniform(0.3, 0.8);
    }
    o.materials = {"walnut wood veneer", "clear glass", std::nullopt};
    spec.openings.push_back(o);
  }
  return spec;
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("scenegen_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

Pixel NearestHitPolicy::locate(const PlacementRequest& request, const std::string&) {
  if (!request.camera || !request.geometry) throw BackendError("no camera or geometry");
  const Camera& cam = *request.camera;
  std::optional<Pixel> best;
  double best_d = max_dist_;
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      const auto hit = request.geometry->cast(pixel_to_ray(cam, {u, v}));
      if (!hit || std::abs(hit->point.z - target_.z) > 1e-3) continue;
      const double d = std::hypot(hit->point.x - target_.x, hit->point.y - target_.y);
      if (d <= best_d) {
        best_d = d;
        best = Pixel{u, v};
      }
    }
  }
  if (!best) throw BackendError("target not visible");
  return *best;
}

}  // namespace fixtures
