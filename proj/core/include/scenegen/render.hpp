#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenegen/camera.hpp"
#include "scenegen/posed.hpp"
#include "scenegen/scene.hpp"

namespace scenegen {

/// Per-pixel element ordinals (0 = background) and hit distances (+inf = background).
struct RenderMaps {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> ids;  // row-major, v * width + u
  std::vector<double> depth;
  /// Ordinal -> element id, restricted to the ordinals present in `ids`.
  std::map<std::uint32_t, std::string> legend;

  std::uint32_t id_at(int u, int v) const { return ids[static_cast<std::size_t>(v) * width + u]; }
  double depth_at(int u, int v) const { return depth[static_cast<std::size_t>(v) * width + u]; }
  bool operator==(const RenderMaps&) const = default;
};

enum class OverlayKind { kAxisMark, kInstanceName };

struct Overlay {
  std::string label;
  Pixel pixel;
  OverlayKind kind = OverlayKind::kAxisMark;
  bool operator==(const Overlay&) const = default;
};

struct View {
  std::string name;
  std::variant<Camera, PanoCamera> camera;
  RenderMaps maps;
  std::vector<Overlay> overlays;
};

struct ViewSet {
  std::vector<View> views;
};

/// Scene meshes prepared for repeated ray casting. Ordinals are assigned
/// 1, 2, ... in ascending element-id order over the rendered elements.
class SceneRenderer {
 public:
  SceneRenderer(const Scene& scene, const MeshSource& source, const ElementFilter& filter = {});

  RenderMaps render(const Camera& camera) const;
  RenderMaps render(const PanoCamera& camera) const;

  const MeshSet& meshes() const { return meshes_; }
  std::uint32_t ordinal(const std::string& element_id) const;

 private:
  template <typename RayFn>
  RenderMaps render_rays(int width, int height, RayFn&& ray_for) const;

  MeshSet meshes_;
  std::map<std::string, std::uint32_t> ordinals_;
  std::vector<std::uint32_t> mesh_ordinal_;  // per MeshSet entry
};

RenderMaps render_view(const Scene& scene, const MeshSource& source, const Camera& camera);
RenderMaps render_panorama(const Scene& scene, const MeshSource& source, const PanoCamera& camera);

/// Projections of integer points on the x and y axes inside the scene bounds.
std::vector<Overlay> make_axis_marks(const Scene& scene, const Camera& camera);
/// Projection of each element's world bounding-box center, labeled with its id.
std::vector<Overlay> make_instance_labels(const Scene& scene, const MeshSource& source, const Camera& camera);
/// Axis marks followed by instance labels.
std::vector<Overlay> make_overlays(const Scene& scene, const MeshSource& source, const Camera& camera);

struct ViewOptions {
  int width = 256;
  int height = 256;
  int pano_height = 256;  // panorama width is twice this
  double corner_fov_deg = 75.0;
};

/// Camera placement rules for the three standard views, exposed for tests.
Camera corner_camera(const Aabb& bounds, bool opposite, const ViewOptions& options = {});
PanoCamera center_pano_camera(const Aabb& bounds, const ViewOptions& options = {});
/// Scene bounds, or the union of instance boxes when the scene has none.
Aabb view_bounds(const Scene& scene, const MeshSource& source);

/// (1) corner perspective with axis marks, (2) panorama from the room center,
/// (3) opposite-corner perspective with instance names.
ViewSet standard_viewset(const Scene& scene, const MeshSource& source, const ViewOptions& options = {});

enum class MapDtype : std::uint32_t { kIds = 1, kDepth = 2 };

/// Flat binary map: "SGM1", u32 width, u32 height, u32 dtype, then little-endian
/// u32 ids or f64 depths.
std::string encode_id_map(const RenderMaps& maps);
std::string encode_depth_map(const RenderMaps& maps);
/// Decodes either map kind into `maps`; throws SceneFormatError on malformed data.
void decode_map(std::string_view bytes, RenderMaps& maps);

/// Camera, legend, overlays and sizes. Maps are referenced by path when
/// `map_paths` is given, otherwise embedded as base64.
nlohmann::json view_to_json(const View& view, const std::pair<std::string, std::string>* map_paths = nullptr);

/// Writes <prefix>_<i>_ids.bin / _depth.bin for every view plus <prefix>.json
/// into dir. Returns the manifest path relative to dir.
std::string write_viewset(const ViewSet& views, const std::filesystem::path& dir, const std::string& prefix);

/// Binary PPM (P6) with a color per ordinal and single-pixel overlay marks.
std::string render_ppm(const View& view);

nlohmann::json camera_to_json(const Camera& camera);
nlohmann::json camera_to_json(const PanoCamera& camera);

}  // namespace scenegen
