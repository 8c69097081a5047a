#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace oracle {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 crs(const Vec3& a, const Vec3& b) { return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x}; }
double dt(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

}  // namespace

std::optional<double> moller_trumbore(const Vec3& origin, const Vec3& dir, const Vec3& a, const Vec3& b,
                                      const Vec3& c) {
  const Vec3 e1 = sub(b, a);
  const Vec3 e2 = sub(c, a);
  const Vec3 p = crs(dir, e2);
  const double det = dt(e1, p);
  if (std::fabs(det) < 1e-14) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = sub(origin, a);
  const double u = dt(s, p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = crs(s, e1);
  const double v = dt(dir, q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = dt(e2, q) * inv;
  if (t <= 0.0) return std::nullopt;
  return t;
}

std::optional<NearestHit> brute_nearest(const std::vector<scenegen::PosedMesh>& meshes, const Vec3& origin,
                                        const Vec3& dir) {
  std::optional<NearestHit> best;
  for (std::size_t m = 0; m < meshes.size(); ++m) {
    const auto& verts = meshes[m].mesh.vertices();
    for (const auto& t : meshes[m].mesh.triangles()) {
      const auto hit = moller_trumbore(origin, dir, verts[t[0]], verts[t[1]], verts[t[2]]);
      if (hit && (!best || *hit < best->distance)) best = NearestHit{*hit, m};
    }
  }
  return best;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = crs(sub(b, a), sub(c, a));
  return 0.5 * std::sqrt(dt(n, n));
}

double mesh_area(const scenegen::TriangleMesh& mesh) {
  double s = 0.0;
  const auto& v = mesh.vertices();
  for (const auto& t : mesh.triangles()) s += triangle_area(v[t[0]], v[t[1]], v[t[2]]);
  return s;
}

std::vector<Surface> brute_surfaces(const scenegen::TriangleMesh& mesh, double min_area, double max_tilt_deg,
                                    double height_tol) {
  const auto& v = mesh.vertices();
  const auto& tris = mesh.triangles();
  const double cos_limit = std::cos(max_tilt_deg * 3.14159265358979323846 / 180.0);

  // Candidate triangles: unit normal z above the tilt limit.
  std::vector<std::size_t> up;
  for (std::size_t i = 0; i < tris.size(); ++i) {
    const Vec3 n = crs(sub(v[tris[i][1]], v[tris[i][0]]), sub(v[tris[i][2]], v[tris[i][0]]));
    const double len = std::sqrt(dt(n, n));
    if (len > 0.0 && n.z / len > cos_limit) up.push_back(i);
  }

  // Enumerate planes by height: sort candidates and start a new plane at each gap over height_tol.
  const auto centroid_z = [&](std::size_t i) { return (v[tris[i][0]].z + v[tris[i][1]].z + v[tris[i][2]].z) / 3.0; };
  std::sort(up.begin(), up.end(), [&](std::size_t a, std::size_t b) { return centroid_z(a) < centroid_z(b); });
  std::vector<std::vector<std::size_t>> planes;
  for (std::size_t k = 0; k < up.size(); ++k) {
    if (k == 0 || centroid_z(up[k]) - centroid_z(up[k - 1]) > height_tol) planes.emplace_back();
    planes.back().push_back(up[k]);
  }

  std::vector<Surface> out;
  for (const auto& plane : planes) {
    // Union-find over triangles that share two vertex positions.
    std::vector<std::size_t> parent(plane.size());
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    const auto key = [&](const Vec3& p) { return std::tuple(p.x, p.y, p.z); };
    for (std::size_t a = 0; a < plane.size(); ++a) {
      for (std::size_t b = a + 1; b < plane.size(); ++b) {
        int shared = 0;
        for (auto ia : tris[plane[a]]) {
          for (auto ib : tris[plane[b]]) shared += key(v[ia]) == key(v[ib]) ? 1 : 0;
        }
        if (shared >= 2) parent[find(a)] = find(b);
      }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t a = 0; a < plane.size(); ++a) groups[find(a)].push_back(plane[a]);
    for (const auto& [root, members] : groups) {
      double area = 0.0;
      std::map<std::tuple<double, double, double>, double> unique_z;
      for (auto t : members) {
        area += triangle_area(v[tris[t][0]], v[tris[t][1]], v[tris[t][2]]);
        for (auto i : tris[t]) unique_z[key(v[i])] = v[i].z;
      }
      if (area < min_area) continue;
      double zs = 0.0;
      for (const auto& [k, z] : unique_z) zs += z;
      out.push_back({area, zs / static_cast<double>(unique_z.size())});
    }
  }
  std::sort(out.begin(), out.end(), [](const Surface& a, const Surface& b) { return a.area > b.area; });
  return out;
}

double shoelace(const std::vector<Vec2>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % p.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
  }
  return inside;
}

bool admits_on_grid(std::int64_t before, std::int64_t after) {
  return 10 * (after - before) >= std::max<std::int64_t>(before, 1);
}

}  // namespace oracle
