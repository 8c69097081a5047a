#include "scenegen/collision.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace scenegen {

namespace {

using Tri = std::array<Vec3, 3>;

Aabb tri_box(const Tri& t) {
  Aabb b;
  for (const auto& p : t) b.extend(p);
  return b;
}

bool boxes_touch(const Aabb& a, const Aabb& b) {
  return a.min.x <= b.max.x && b.min.x <= a.max.x && a.min.y <= b.max.y && b.min.y <= a.max.y &&
         a.min.z <= b.max.z && b.min.z <= a.max.z;
}

// Interval covered by triangle `t` on the line with direction `dir`, given the
// signed distances of its corners to the other triangle's plane.
std::pair<double, double> plane_cut_interval(const Tri& t, const std::array<double, 3>& dist, const Vec3& dir) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const auto take = [&](double s) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  };
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const double pi = dot(dir, t[i]);
    const double pj = dot(dir, t[j]);
    if (dist[i] == 0.0) take(pi);
    if (dist[i] * dist[j] < 0.0) take(pi + (pj - pi) * dist[i] / (dist[i] - dist[j]));
  }
  return {lo, hi};
}

bool straddles(const std::array<double, 3>& d, double tol) {
  const double lo = std::min({d[0], d[1], d[2]});
  const double hi = std::max({d[0], d[1], d[2]});
  return lo < -tol && hi > tol;
}

// Proper crossing of two triangles: each has corners farther than tol on both
// sides of the other's plane, and their cuts along the shared line overlap.
bool triangles_cross(const Tri& a, const Tri& b, const Vec3& na, const Vec3& nb, double tol) {
  std::array<double, 3> da{};
  std::array<double, 3> db{};
  for (int i = 0; i < 3; ++i) da[i] = dot(nb, a[i] - b[0]);
  if (!straddles(da, tol)) return false;
  for (int i = 0; i < 3; ++i) db[i] = dot(na, b[i] - a[0]);
  if (!straddles(db, tol)) return false;
  const Vec3 dir = cross(na, nb);
  if (length(dir) < 1e-12) return false;
  const auto [alo, ahi] = plane_cut_interval(a, da, dir);
  const auto [blo, bhi] = plane_cut_interval(b, db, dir);
  return std::max(alo, blo) < std::min(ahi, bhi) - 1e-12;
}

bool any_sample_inside(const TriangleMesh& probe, const TriangleMesh& solid, double tol) {
  const Aabb box = solid.bounds();
  for (std::size_t i = 0; i < probe.triangle_count(); ++i) {
    const auto c = probe.corners(i);
    const Vec3 sample = (c[0] + c[1] + c[2]) / 3.0 - probe.normals()[i] * tol;
    if (sample.x <= box.min.x || sample.y <= box.min.y || sample.z <= box.min.z || sample.x >= box.max.x ||
        sample.y >= box.max.y || sample.z >= box.max.z) {
      continue;
    }
    if (winding_number(solid, sample) > 0.5) return true;
  }
  return false;
}

}  // namespace

double aabb_penetration(const Aabb& a, const Aabb& b, int* axis) {
  double best = std::numeric_limits<double>::infinity();
  int best_axis = 0;
  for (int k = 0; k < 3; ++k) {
    const double overlap = std::min(a.max[k], b.max[k]) - std::max(a.min[k], b.min[k]);
    if (overlap < best) {
      best = overlap;
      best_axis = k;
    }
  }
  if (axis) *axis = best_axis;
  return best;
}

double winding_number(const TriangleMesh& mesh, const Vec3& p) {
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.triangle_count(); ++i) {
    const auto c = mesh.corners(i);
    const Vec3 a = c[0] - p;
    const Vec3 b = c[1] - p;
    const Vec3 d = c[2] - p;
    const double la = length(a);
    const double lb = length(b);
    const double ld = length(d);
    const double num = dot(a, cross(b, d));
    const double den = la * lb * ld + dot(a, b) * ld + dot(a, d) * lb + dot(b, d) * la;
    total += 2.0 * std::atan2(num, den);
  }
  return total / (4.0 * kPi);
}

bool meshes_interpenetrate(const TriangleMesh& a, const TriangleMesh& b, double tol) {
  const Aabb overlap_box{max(a.bounds().min, b.bounds().min), min(a.bounds().max, b.bounds().max)};
  std::vector<std::size_t> b_tris;
  std::vector<Aabb> b_boxes;
  for (std::size_t j = 0; j < b.triangle_count(); ++j) {
    const Aabb box = tri_box(b.corners(j));
    if (boxes_touch(box, overlap_box)) {
      b_tris.push_back(j);
      b_boxes.push_back(box);
    }
  }
  for (std::size_t i = 0; i < a.triangle_count(); ++i) {
    const Tri ta = a.corners(i);
    const Aabb box = tri_box(ta);
    if (!boxes_touch(box, overlap_box)) continue;
    for (std::size_t k = 0; k < b_tris.size(); ++k) {
      if (!boxes_touch(box, b_boxes[k])) continue;
      const std::size_t j = b_tris[k];
      if (triangles_cross(ta, b.corners(j), a.normals()[i], b.normals()[j], tol)) return true;
    }
  }
  return any_sample_inside(a, b, tol) || any_sample_inside(b, a, tol);
}

CollisionReport check_collision(const PosedMesh& candidate, std::span<const PosedMesh> scene_meshes, double tol) {
  CollisionReport report;
  for (const auto& other : scene_meshes) {
    if (other.element_id == candidate.element_id && other.placement_index == candidate.placement_index) continue;
    if (candidate.mesh.empty() || other.mesh.empty()) continue;
    int axis = 0;
    const double depth = aabb_penetration(candidate.mesh.bounds(), other.mesh.bounds(), &axis);
    if (!(depth > tol)) continue;
    if (!meshes_interpenetrate(candidate.mesh, other.mesh, tol)) continue;
    report.contacts.push_back({other.element_id, other.placement_index, depth, axis});
  }
  return report;
}

}  // namespace scenegen
