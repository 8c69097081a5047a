#include "scenegen/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace scenegen {

namespace {

using VertexKey = std::tuple<long long, long long, long long>;

// Vertices closer than the quantum are welded so that meshes exported with
// per-face vertex copies still have shared edges.
constexpr double kWeldQuantum = 1e-9;

VertexKey quantize(const Vec3& v) {
  return {std::llround(v.x / kWeldQuantum), std::llround(v.y / kWeldQuantum), std::llround(v.z / kWeldQuantum)};
}

std::vector<std::uint32_t> weld(const TriangleMesh& mesh) {
  std::map<VertexKey, std::uint32_t> ids;
  std::vector<std::uint32_t> out;
  out.reserve(mesh.vertices().size());
  for (const auto& v : mesh.vertices()) {
    auto [it, inserted] = ids.emplace(quantize(v), static_cast<std::uint32_t>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

std::vector<std::vector<Vec2>> trace_boundary(const TriangleMesh& mesh, const std::vector<std::uint32_t>& welded,
                                              const std::vector<std::uint32_t>& members) {
  // Directed edges that are not cancelled by an opposite edge form the boundary.
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
  std::map<std::uint32_t, Vec3> position;
  for (auto tri : members) {
    const auto& t = mesh.triangles()[tri];
    for (int k = 0; k < 3; ++k) {
      const auto a = welded[t[k]];
      const auto b = welded[t[(k + 1) % 3]];
      position[a] = mesh.vertices()[t[k]];
      auto rev = edges.find({b, a});
      if (rev != edges.end()) {
        if (--rev->second == 0) edges.erase(rev);
      } else {
        ++edges[{a, b}];
      }
    }
  }
  std::multimap<std::uint32_t, std::uint32_t> next;
  for (const auto& [e, count] : edges) {
    for (int i = 0; i < count; ++i) next.emplace(e.first, e.second);
  }
  std::vector<std::vector<Vec2>> loops;
  while (!next.empty()) {
    auto it = next.begin();
    const auto start = it->first;
    std::vector<Vec2> loop;
    auto cur = start;
    while (true) {
      auto step = next.find(cur);
      if (step == next.end()) break;
      const auto to = step->second;
      next.erase(step);
      const Vec3& p = position[cur];
      loop.push_back({p.x, p.y});
      cur = to;
      if (cur == start) break;
    }
    if (loop.size() >= 3) loops.push_back(std::move(loop));
  }
  return loops;
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return length(p - (a + ab * t));
}

}  // namespace

std::vector<PlaceableSurface> detect_placeable_surfaces(const TriangleMesh& mesh, const SurfaceOptions& options) {
  const double cos_limit = std::cos(deg_to_rad(options.max_tilt_deg));
  const auto& tris = mesh.triangles();
  std::vector<bool> candidate(tris.size(), false);
  for (std::size_t i = 0; i < tris.size(); ++i) candidate[i] = mesh.normals()[i].z > cos_limit;

  const auto welded = weld(mesh);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> edge_faces;
  for (std::uint32_t i = 0; i < tris.size(); ++i) {
    if (!candidate[i]) continue;
    for (int k = 0; k < 3; ++k) {
      auto a = welded[tris[i][k]];
      auto b = welded[tris[i][(k + 1) % 3]];
      if (a > b) std::swap(a, b);
      edge_faces[{a, b}].push_back(i);
    }
  }

  std::vector<bool> assigned(tris.size(), false);
  std::vector<PlaceableSurface> surfaces;
  for (std::uint32_t seed = 0; seed < tris.size(); ++seed) {
    if (!candidate[seed] || assigned[seed]) continue;
    std::vector<std::uint32_t> members;
    double zmin = std::numeric_limits<double>::infinity();
    double zmax = -zmin;
    const auto fits = [&](std::uint32_t tri) {
      double lo = zmin;
      double hi = zmax;
      for (const auto& c : mesh.corners(tri)) {
        lo = std::min(lo, c.z);
        hi = std::max(hi, c.z);
      }
      return std::pair{hi - lo <= options.height_tol, std::pair{lo, hi}};
    };
    auto [seed_ok, seed_range] = fits(seed);
    if (!seed_ok) {
      // A single steep-enough triangle can still span more than height_tol; it forms no surface.
      assigned[seed] = true;
      continue;
    }
    std::deque<std::uint32_t> queue{seed};
    assigned[seed] = true;
    std::tie(zmin, zmax) = seed_range;
    while (!queue.empty()) {
      const auto tri = queue.front();
      queue.pop_front();
      members.push_back(tri);
      for (int k = 0; k < 3; ++k) {
        auto a = welded[tris[tri][k]];
        auto b = welded[tris[tri][(k + 1) % 3]];
        if (a > b) std::swap(a, b);
        for (auto nb : edge_faces[{a, b}]) {
          if (assigned[nb]) continue;
          auto [ok, range] = fits(nb);
          if (!ok) continue;
          assigned[nb] = true;
          std::tie(zmin, zmax) = range;
          queue.push_back(nb);
        }
      }
    }
    std::sort(members.begin(), members.end());

    PlaceableSurface s;
    s.triangle_ids = members;
    double zsum = 0.0;
    std::set<std::uint32_t> seen_welded;
    for (auto tri : members) {
      s.area += mesh.areas()[tri];
      for (auto vi : tris[tri]) {
        if (seen_welded.insert(welded[vi]).second) {
          zsum += mesh.vertices()[vi].z;
        }
      }
    }
    if (s.area < options.min_area) continue;
    s.height_z = zsum / static_cast<double>(seen_welded.size());
    s.boundary = trace_boundary(mesh, welded, members);
    surfaces.push_back(std::move(s));
  }
  std::stable_sort(surfaces.begin(), surfaces.end(), [](const PlaceableSurface& a, const PlaceableSurface& b) {
    return a.area > b.area;
  });
  return surfaces;
}

bool boundary_contains(const std::vector<std::vector<Vec2>>& loops, Vec2 p) {
  bool inside = false;
  for (const auto& loop : loops) {
    for (std::size_t i = 0, j = loop.size() - 1; i < loop.size(); j = i++) {
      const Vec2& a = loop[i];
      const Vec2& b = loop[j];
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < x) inside = !inside;
      }
    }
  }
  return inside;
}

double boundary_distance(const std::vector<std::vector<Vec2>>& loops, Vec2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& loop : loops) {
    for (std::size_t i = 0, j = loop.size() - 1; i < loop.size(); j = i++) {
      best = std::min(best, segment_distance(p, loop[j], loop[i]));
    }
  }
  return best;
}

std::optional<std::size_t> surface_membership(std::span<const PlaceableSurface> surfaces, const Vec3& point,
                                              double xy_margin, double z_tol) {
  std::optional<std::size_t> best;
  const Vec2 p{point.x, point.y};
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    const auto& s = surfaces[i];
    if (!(std::abs(point.z - s.height_z) <= z_tol)) continue;
    if (!boundary_contains(s.boundary, p)) continue;
    if (xy_margin > 0.0 && boundary_distance(s.boundary, p) < xy_margin) continue;
    if (!best || s.area < surfaces[*best].area) best = i;
  }
  return best;
}

}  // namespace scenegen
