#include "scenegen/raycast.hpp"

#include <algorithm>
#include <numeric>

namespace scenegen {

std::optional<double> intersect_triangle(const Ray& ray, const Vec3& a, const Vec3& b, const Vec3& c,
                                         double t_max, Vec3* barycentric) {
  const Vec3& d = ray.direction;
  int kz = 0;
  if (std::abs(d.y) > std::abs(d[kz])) kz = 1;
  if (std::abs(d.z) > std::abs(d[kz])) kz = 2;
  int kx = (kz + 1) % 3;
  int ky = (kx + 1) % 3;
  if (d[kz] < 0.0) std::swap(kx, ky);

  const double sx = d[kx] / d[kz];
  const double sy = d[ky] / d[kz];
  const double sz = 1.0 / d[kz];

  const Vec3 pa = a - ray.origin;
  const Vec3 pb = b - ray.origin;
  const Vec3 pc = c - ray.origin;

  const double ax = pa[kx] - sx * pa[kz];
  const double ay = pa[ky] - sy * pa[kz];
  const double bx = pb[kx] - sx * pb[kz];
  const double by = pb[ky] - sy * pb[kz];
  const double cx = pc[kx] - sx * pc[kz];
  const double cy = pc[ky] - sy * pc[kz];

  const double u = cx * by - cy * bx;
  const double v = ax * cy - ay * cx;
  const double w = bx * ay - by * ax;

  if ((u < 0.0 || v < 0.0 || w < 0.0) && (u > 0.0 || v > 0.0 || w > 0.0)) return std::nullopt;
  const double det = u + v + w;
  if (det == 0.0) return std::nullopt;

  const double az = sz * pa[kz];
  const double bz = sz * pb[kz];
  const double cz = sz * pc[kz];
  const double t = (u * az + v * bz + w * cz) / det;
  if (!(t > 0.0) || !(t < t_max)) return std::nullopt;
  if (barycentric) *barycentric = Vec3{u / det, v / det, w / det};
  return t;
}

namespace {

constexpr std::uint32_t kLeafSize = 4;

bool ray_box(const Ray& ray, const Vec3& inv, const Aabb& box, double t_max, double& t_enter) {
  double lo = 0.0;
  double hi = t_max;
  for (int axis = 0; axis < 3; ++axis) {
    double t0 = (box.min[axis] - ray.origin[axis]) * inv[axis];
    double t1 = (box.max[axis] - ray.origin[axis]) * inv[axis];
    if (t0 > t1) std::swap(t0, t1);
    // NaN from 0 * inf means the ray lies in the slab plane; treat it as inside.
    if (t0 == t0) lo = std::max(lo, t0);
    if (t1 == t1) hi = std::min(hi, t1 * (1.0 + 4e-16));
    if (lo > hi) return false;
  }
  t_enter = lo;
  return true;
}

}  // namespace

MeshSet::MeshSet(std::vector<PosedMesh> meshes) : meshes_(std::move(meshes)) {
  std::vector<Vec3> centroids;
  for (std::uint32_t m = 0; m < meshes_.size(); ++m) {
    const auto& mesh = meshes_[m].mesh;
    for (std::uint32_t t = 0; t < mesh.triangle_count(); ++t) {
      refs_.push_back({m, t});
      const auto c = mesh.corners(t);
      centroids.push_back((c[0] + c[1] + c[2]) / 3.0);
    }
    if (!mesh.empty()) bounds_.extend(mesh.bounds());
  }
  if (!refs_.empty()) {
    nodes_.reserve(2 * refs_.size() / kLeafSize + 1);
    build(0, static_cast<std::uint32_t>(refs_.size()), centroids);
  }
}

std::uint32_t MeshSet::build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({});
  Aabb box;
  Aabb centroid_box;
  for (std::uint32_t i = begin; i < end; ++i) {
    for (const auto& p : meshes_[refs_[i].mesh].mesh.corners(refs_[i].tri)) box.extend(p);
    centroid_box.extend(centroids[i]);
  }
  nodes_[index].box = box;
  const Vec3 spread = centroid_box.extent();
  int axis = 0;
  if (spread.y > spread[axis]) axis = 1;
  if (spread.z > spread[axis]) axis = 2;
  if (end - begin <= kLeafSize || spread[axis] <= 0.0) {
    nodes_[index].first = begin;
    nodes_[index].count = end - begin;
    return index;
  }
  const std::uint32_t mid = begin + (end - begin) / 2;
  // Partition refs and centroids together around the median centroid.
  std::vector<std::uint32_t> order(end - begin);
  std::iota(order.begin(), order.end(), begin);
  std::nth_element(order.begin(), order.begin() + (mid - begin), order.end(),
                   [&](std::uint32_t l, std::uint32_t r) {
                     if (centroids[l][axis] != centroids[r][axis]) return centroids[l][axis] < centroids[r][axis];
                     return l < r;
                   });
  std::vector<TriRef> refs;
  std::vector<Vec3> cents;
  refs.reserve(order.size());
  cents.reserve(order.size());
  for (auto i : order) {
    refs.push_back(refs_[i]);
    cents.push_back(centroids[i]);
  }
  std::copy(refs.begin(), refs.end(), refs_.begin() + begin);
  std::copy(cents.begin(), cents.end(), centroids.begin() + begin);

  build(begin, mid, centroids);
  const std::uint32_t right = build(mid, end, centroids);
  nodes_[index].first = right;
  return index;
}

bool MeshSet::test_ref(const Ray& ray, const TriRef& ref, std::optional<RayHit>& best) const {
  const auto c = meshes_[ref.mesh].mesh.corners(ref.tri);
  const double limit = best ? best->distance : std::numeric_limits<double>::infinity();
  Vec3 bary;
  // Allow equal distances through so ties resolve by (mesh, triangle) order.
  const auto t = intersect_triangle(ray, c[0], c[1], c[2], std::nextafter(limit, INFINITY), &bary);
  if (!t) return false;
  if (best) {
    if (*t > best->distance) return false;
    if (*t == best->distance &&
        std::pair(ref.mesh, ref.tri) >= std::pair(static_cast<std::uint32_t>(best->mesh_index), best->triangle)) {
      return false;
    }
  }
  RayHit hit;
  hit.mesh_index = ref.mesh;
  hit.triangle = ref.tri;
  hit.distance = *t;
  hit.barycentric = bary;
  hit.point = c[0] * bary.x + c[1] * bary.y + c[2] * bary.z;
  best = hit;
  return true;
}

std::optional<RayHit> MeshSet::cast(const Ray& ray) const {
  std::optional<RayHit> best;
  if (nodes_.empty()) return best;
  const Vec3 inv{1.0 / ray.direction.x, 1.0 / ray.direction.y, 1.0 / ray.direction.z};
  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    double t_enter = 0.0;
    const double limit = best ? best->distance : std::numeric_limits<double>::infinity();
    if (!ray_box(ray, inv, node.box, limit, t_enter)) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) test_ref(ray, refs_[i], best);
      continue;
    }
    const std::uint32_t left = static_cast<std::uint32_t>(&node - nodes_.data()) + 1;
    const std::uint32_t right = node.first;
    double tl = 0.0;
    double tr = 0.0;
    const bool hl = ray_box(ray, inv, nodes_[left].box, limit, tl);
    const bool hr = ray_box(ray, inv, nodes_[right].box, limit, tr);
    // Push the farther child first so the nearer one is popped next.
    if (hl && hr) {
      if (tl <= tr) {
        stack[top++] = right;
        stack[top++] = left;
      } else {
        stack[top++] = left;
        stack[top++] = right;
      }
    } else if (hl) {
      stack[top++] = left;
    } else if (hr) {
      stack[top++] = right;
    }
  }
  return best;
}

std::optional<RayHit> MeshSet::cast_linear(const Ray& ray) const {
  std::optional<RayHit> best;
  for (const auto& ref : refs_) test_ref(ray, ref, best);
  return best;
}

}  // namespace scenegen
