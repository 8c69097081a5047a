#include "scenegen/render.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "scenegen/errors.hpp"
#include "scenegen/io.hpp"
#include "scenegen/scene_json.hpp"

namespace scenegen {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "map encoding assumes a little-endian host");

SceneRenderer::SceneRenderer(const Scene& scene, const MeshSource& source, const ElementFilter& filter) {
  std::uint32_t next = 1;
  for (const auto& [id, element] : scene.elements) {
    if (filter && !filter(element)) continue;
    ordinals_[id] = next++;
  }
  auto posed = posed_meshes(scene, source, filter);
  mesh_ordinal_.reserve(posed.size());
  for (const auto& p : posed) mesh_ordinal_.push_back(ordinals_.at(p.element_id));
  meshes_ = MeshSet(std::move(posed));
}

std::uint32_t SceneRenderer::ordinal(const std::string& element_id) const {
  const auto it = ordinals_.find(element_id);
  return it == ordinals_.end() ? 0 : it->second;
}

template <typename RayFn>
RenderMaps SceneRenderer::render_rays(int width, int height, RayFn&& ray_for) const {
  RenderMaps maps;
  maps.width = width;
  maps.height = height;
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  maps.ids.assign(n, 0);
  maps.depth.assign(n, std::numeric_limits<double>::infinity());
  std::vector<std::string> names(ordinals_.size() + 1);
  for (const auto& [id, ord] : ordinals_) names[ord] = id;
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      const auto hit = meshes_.cast(ray_for(Pixel{u, v}));
      if (!hit) continue;
      const auto k = static_cast<std::size_t>(v) * width + u;
      const auto ord = mesh_ordinal_[hit->mesh_index];
      maps.ids[k] = ord;
      maps.depth[k] = hit->distance;
      maps.legend.try_emplace(ord, names[ord]);
    }
  }
  return maps;
}

RenderMaps SceneRenderer::render(const Camera& camera) const {
  camera.validate();
  return render_rays(camera.width, camera.height, [&](Pixel p) { return pixel_to_ray(camera, p); });
}

RenderMaps SceneRenderer::render(const PanoCamera& camera) const {
  camera.validate();
  return render_rays(camera.width, camera.height,
                     [&](Pixel p) { return Ray{camera.position, pano_direction(camera, p)}; });
}

RenderMaps render_view(const Scene& scene, const MeshSource& source, const Camera& camera) {
  return SceneRenderer(scene, source).render(camera);
}

RenderMaps render_panorama(const Scene& scene, const MeshSource& source, const PanoCamera& camera) {
  return SceneRenderer(scene, source).render(camera);
}

std::vector<Overlay> make_axis_marks(const Scene& scene, const Camera& camera) {
  std::vector<Overlay> out;
  if (scene.bounds.empty()) return out;
  const auto mark = [&](const Vec3& p, std::string label) {
    const auto img = project(camera, p);
    if (!img) return;
    const auto px = to_pixel(camera, *img);
    if (px) out.push_back({std::move(label), *px, OverlayKind::kAxisMark});
  };
  const Aabb& b = scene.bounds;
  for (auto i = static_cast<long>(std::ceil(b.min.x)); i <= static_cast<long>(std::floor(b.max.x)); ++i) {
    mark({static_cast<double>(i), 0.0, 0.0}, "x=" + std::to_string(i));
  }
  for (auto j = static_cast<long>(std::ceil(b.min.y)); j <= static_cast<long>(std::floor(b.max.y)); ++j) {
    mark({0.0, static_cast<double>(j), 0.0}, "y=" + std::to_string(j));
  }
  return out;
}

std::vector<Overlay> make_instance_labels(const Scene& scene, const MeshSource& source, const Camera& camera) {
  std::vector<Overlay> out;
  for (const auto& [id, element] : scene.elements) {
    Aabb box;
    for (std::size_t i = 0; i < element.placements.size(); ++i) {
      const auto posed = posed_instance(scene, source, element, i);
      if (!posed.mesh.empty()) box.extend(posed.mesh.bounds());
    }
    if (box.empty()) continue;
    const auto img = project(camera, box.center());
    if (!img) continue;
    const auto px = to_pixel(camera, *img);
    if (px) out.push_back({id, *px, OverlayKind::kInstanceName});
  }
  return out;
}

std::vector<Overlay> make_overlays(const Scene& scene, const MeshSource& source, const Camera& camera) {
  auto out = make_axis_marks(scene, camera);
  auto names = make_instance_labels(scene, source, camera);
  out.insert(out.end(), names.begin(), names.end());
  return out;
}

Camera corner_camera(const Aabb& bounds, bool opposite, const ViewOptions& options) {
  const Vec3 e = bounds.extent();
  Camera cam;
  cam.width = options.width;
  cam.height = options.height;
  cam.vertical_fov = deg_to_rad(options.corner_fov_deg);
  const double z = bounds.min.z + 0.85 * e.z;
  if (opposite) {
    cam.position = {bounds.max.x - 0.1 * e.x, bounds.max.y - 0.1 * e.y, z};
  } else {
    cam.position = {bounds.min.x + 0.1 * e.x, bounds.min.y + 0.1 * e.y, z};
  }
  const Vec3 c = bounds.center();
  cam.look_at = {c.x, c.y, bounds.min.z + 0.2 * e.z};
  return cam;
}

PanoCamera center_pano_camera(const Aabb& bounds, const ViewOptions& options) {
  PanoCamera cam;
  cam.height = options.pano_height;
  cam.width = 2 * options.pano_height;
  const Vec3 c = bounds.center();
  const double eye = bounds.min.z + 1.6;
  cam.position = {c.x, c.y, eye < bounds.max.z ? eye : c.z};
  return cam;
}

Aabb view_bounds(const Scene& scene, const MeshSource& source) {
  if (!scene.bounds.empty()) return scene.bounds;
  Aabb box;
  for (const auto& p : posed_meshes(scene, source)) {
    if (!p.mesh.empty()) box.extend(p.mesh.bounds());
  }
  if (box.empty()) box = Aabb{{-1.0, -1.0, 0.0}, {1.0, 1.0, 2.0}};
  return box;
}

ViewSet standard_viewset(const Scene& scene, const MeshSource& source, const ViewOptions& options) {
  const Aabb bounds = view_bounds(scene, source);
  const SceneRenderer renderer(scene, source);
  ViewSet set;

  const Camera corner = corner_camera(bounds, false, options);
  set.views.push_back({"corner", corner, renderer.render(corner), make_axis_marks(scene, corner)});

  const PanoCamera pano = center_pano_camera(bounds, options);
  set.views.push_back({"pano", pano, renderer.render(pano), {}});

  const Camera labels = corner_camera(bounds, true, options);
  set.views.push_back({"labels", labels, renderer.render(labels), make_instance_labels(scene, source, labels)});
  return set;
}

namespace {

constexpr std::string_view kMapMagic = "SGM1";

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T get(std::string_view bytes, std::size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) throw SceneFormatError("truncated map data", "offset " + std::to_string(pos));
  T value;
  std::memcpy(&value, bytes.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

std::string map_header(const RenderMaps& maps, MapDtype dtype) {
  std::string out(kMapMagic);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(maps.width));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(maps.height));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dtype));
  return out;
}

std::string_view overlay_kind_name(OverlayKind k) {
  return k == OverlayKind::kAxisMark ? "axis_mark" : "instance_name";
}

}  // namespace

std::string encode_id_map(const RenderMaps& maps) {
  std::string out = map_header(maps, MapDtype::kIds);
  out.reserve(out.size() + maps.ids.size() * 4);
  for (auto id : maps.ids) put<std::uint32_t>(out, id);
  return out;
}

std::string encode_depth_map(const RenderMaps& maps) {
  std::string out = map_header(maps, MapDtype::kDepth);
  out.reserve(out.size() + maps.depth.size() * 8);
  for (auto d : maps.depth) put<double>(out, d);
  return out;
}

void decode_map(std::string_view bytes, RenderMaps& maps) {
  if (bytes.substr(0, 4) != kMapMagic) throw SceneFormatError("bad map magic", "offset 0");
  std::size_t pos = 4;
  const auto w = get<std::uint32_t>(bytes, pos);
  const auto h = get<std::uint32_t>(bytes, pos);
  const auto dtype = get<std::uint32_t>(bytes, pos);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  maps.width = static_cast<int>(w);
  maps.height = static_cast<int>(h);
  if (dtype == static_cast<std::uint32_t>(MapDtype::kIds)) {
    maps.ids.resize(n);
    for (auto& id : maps.ids) id = get<std::uint32_t>(bytes, pos);
  } else if (dtype == static_cast<std::uint32_t>(MapDtype::kDepth)) {
    maps.depth.resize(n);
    for (auto& d : maps.depth) d = get<double>(bytes, pos);
  } else {
    throw SceneFormatError("unknown map dtype", "offset 12");
  }
  if (pos != bytes.size()) throw SceneFormatError("trailing map data", "offset " + std::to_string(pos));
}

json camera_to_json(const Camera& c) {
  return json{{"kind", "perspective"},
              {"position", vec_to_json(c.position)},
              {"look_at", vec_to_json(c.look_at)},
              {"up", vec_to_json(c.up)},
              {"vertical_fov", number_to_json(c.vertical_fov)},
              {"width", c.width},
              {"height", c.height}};
}

json camera_to_json(const PanoCamera& c) {
  return json{{"kind", "panorama"}, {"position", vec_to_json(c.position)}, {"width", c.width}, {"height", c.height}};
}

json view_to_json(const View& view, const std::pair<std::string, std::string>* map_paths) {
  json j;
  j["name"] = view.name;
  j["camera"] = std::visit([](const auto& c) { return camera_to_json(c); }, view.camera);
  j["width"] = view.maps.width;
  j["height"] = view.maps.height;
  json legend = json::object();
  for (const auto& [ord, id] : view.maps.legend) legend[std::to_string(ord)] = id;
  j["legend"] = std::move(legend);
  json overlays = json::array();
  for (const auto& o : view.overlays) {
    overlays.push_back(json{{"label", o.label}, {"pixel", {o.pixel.u, o.pixel.v}}, {"kind", overlay_kind_name(o.kind)}});
  }
  j["overlays"] = std::move(overlays);
  if (map_paths) {
    j["id_map_path"] = map_paths->first;
    j["depth_map_path"] = map_paths->second;
  } else {
    j["id_map"] = base64_encode(encode_id_map(view.maps));
  }
  return j;
}

std::string write_viewset(const ViewSet& views, const std::filesystem::path& dir, const std::string& prefix) {
  std::filesystem::create_directories(dir);
  json manifest = json::array();
  for (std::size_t i = 0; i < views.views.size(); ++i) {
    const auto& v = views.views[i];
    const std::string stem = prefix + "_" + std::to_string(i) + "_" + v.name;
    const std::pair<std::string, std::string> paths{stem + "_ids.bin", stem + "_depth.bin"};
    write_file_atomic(dir / paths.first, encode_id_map(v.maps));
    write_file_atomic(dir / paths.second, encode_depth_map(v.maps));
    manifest.push_back(view_to_json(v, &paths));
  }
  const std::string name = prefix + ".json";
  write_file_atomic(dir / name, manifest.dump(1) + "\n");
  return name;
}

std::string render_ppm(const View& view) {
  const auto& m = view.maps;
  std::string out = "P6\n" + std::to_string(m.width) + " " + std::to_string(m.height) + "\n255\n";
  const auto header = out.size();
  out.resize(header + static_cast<std::size_t>(m.width) * m.height * 3);
  for (std::size_t k = 0; k < m.ids.size(); ++k) {
    const std::uint32_t id = m.ids[k];
    unsigned char rgb[3] = {0, 0, 0};
    if (id != 0) {
      // Spread ordinals over hue-ish space, darken with distance.
      std::uint32_t h = id * 2654435761u;
      const double shade = 1.0 / (1.0 + 0.15 * m.depth[k]);
      for (int c = 0; c < 3; ++c) {
        const double base = 80.0 + static_cast<double>((h >> (8 * c)) & 0xFF) * (175.0 / 255.0);
        rgb[c] = static_cast<unsigned char>(base * (0.4 + 0.6 * shade));
      }
    }
    std::memcpy(out.data() + header + 3 * k, rgb, 3);
  }
  for (const auto& o : view.overlays) {
    if (o.pixel.u < 0 || o.pixel.v < 0 || o.pixel.u >= m.width || o.pixel.v >= m.height) continue;
    const std::size_t k = static_cast<std::size_t>(o.pixel.v) * m.width + o.pixel.u;
    const unsigned char mark[3] = {255, static_cast<unsigned char>(o.kind == OverlayKind::kAxisMark ? 0 : 255), 255};
    std::memcpy(out.data() + header + 3 * k, mark, 3);
  }
  return out;
}

}  // namespace scenegen
