#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "scenegen/errors.hpp"
#include "oracles.hpp"
#include "scenegen/camera.hpp"
#include "scenegen/collision.hpp"
#include "scenegen/raycast.hpp"
#include "scenegen/surfaces.hpp"

using namespace scenegen;

namespace {

TriangleMesh unit_cube_at(Vec3 c) { return make_box(c - Vec3{0.5, 0.5, 0.5}, c + Vec3{0.5, 0.5, 0.5}); }

PosedMesh posed(const std::string& id, TriangleMesh m) { return PosedMesh{id, 0, std::move(m)}; }

Vec3 random_unit(Rng& rng) {
  while (true) {
    const Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double n = length(v);
    if (n > 0.1 && n <= 1.0) return v / n;
  }
}

TriangleMesh rotate_z(const TriangleMesh& m, double rad) {
  Placement p;
  p.rotation_z = rad;
  return m.transformed(p);
}

// Any edge of one mesh crossing the interior of a triangle of the other.
bool brute_triangles_cross(const TriangleMesh& a, const TriangleMesh& b) {
  auto edges_cross = [](const TriangleMesh& x, const TriangleMesh& y) {
    for (std::size_t i = 0; i < x.triangle_count(); ++i) {
      const auto c = x.corners(i);
      for (int e = 0; e < 3; ++e) {
        const Vec3 p = c[e];
        const Vec3 q = c[(e + 1) % 3];
        const double len = length(q - p);
        for (std::size_t j = 0; j < y.triangle_count(); ++j) {
          const auto t = y.corners(j);
          const auto d = oracle::moller_trumbore(p, (q - p) / len, t[0], t[1], t[2]);
          if (d && *d > 1e-9 && *d < len - 1e-9) return true;
        }
      }
    }
    return false;
  };
  return edges_cross(a, b) || edges_cross(b, a);
}

}  // namespace

TEST(Mesh, RejectsDegenerateAndBadIndices) {
  EXPECT_THROW(TriangleMesh({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 2}}), GeometryError);
  EXPECT_THROW(TriangleMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 3}}), GeometryError);
  EXPECT_THROW(TriangleMesh({{0, 0, NAN}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}}), GeometryError);
}

TEST(Mesh, ObjRoundTripAndFan) {
  const auto quad = parse_obj("# square\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1/1 2/2 3/3 4/4\n");
  EXPECT_EQ(quad.triangle_count(), 2u);
  EXPECT_NEAR(quad.total_area(), 1.0, 1e-12);
  const auto cube = unit_cube_at({0, 0, 0});
  EXPECT_EQ(parse_obj(format_obj(cube)), cube);
  EXPECT_THROW(parse_obj("v 0 0 0\nf 1 2 3\n"), GeometryError);
}

TEST(Raycast, CubeFromAbove) {
  const MeshSet set({posed("cube", unit_cube_at({0, 0, 0}))});
  const auto hit = cast_ray(set, {{0, 0, 5}, {0, 0, -1}});
  ASSERT_TRUE(hit.has_value());
  EXPECT_NEAR(hit->distance, 4.5, 1e-12);
  EXPECT_NEAR(hit->point.z, 0.5, 1e-12);
  EXPECT_NEAR(hit->barycentric.x + hit->barycentric.y + hit->barycentric.z, 1.0, 1e-12);
  EXPECT_FALSE(cast_ray(set, {{5, 5, 5}, {0, 0, 1}}).has_value());
}

TEST(Raycast, SharedEdgeIsHitOnce) {
  // The ray passes exactly through the diagonal shared by the top face's two triangles.
  const MeshSet set({posed("cube", unit_cube_at({0, 0, 0}))});
  int hits = 0;
  for (const double s : {-0.25, 0.0, 0.25}) {
    const auto h = cast_ray(set, {{s, s, 5}, {0, 0, -1}});
    ASSERT_TRUE(h.has_value()) << s;
    EXPECT_NEAR(h->distance, 4.5, 1e-12);
    ++hits;
  }
  EXPECT_EQ(hits, 3);
  // Watertightness: no ray through vertices and edges of a closed mesh slips through.
  const MeshSet sphere({posed("s", make_uv_sphere({0, 0, 0}, 1.0, 12, 16))});
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 target = sphere.meshes()[0].mesh.vertices()[rng.index(sphere.meshes()[0].mesh.vertices().size())];
    const Vec3 origin{rng.uniform(-3, 3), rng.uniform(-3, 3), 4.0};
    EXPECT_TRUE(cast_ray(sphere, {origin, normalized(target * 0.5 - origin)}).has_value());
  }
}

TEST(Raycast, AcceleratedMatchesBruteForce) {
  const auto sphere = make_uv_sphere({0.2, -0.1, 0.3}, 1.0, 16, 17);  // ~500 triangles
  ASSERT_GE(sphere.triangle_count(), 480u);
  std::vector<PosedMesh> meshes{posed("s", sphere)};
  const MeshSet set(meshes);
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 o = random_unit(rng) * rng.uniform(0.0, 3.0);
    const Vec3 d = random_unit(rng);
    const auto fast = set.cast({o, d});
    const auto slow = oracle::brute_nearest(meshes, o, d);
    ASSERT_EQ(fast.has_value(), slow.has_value()) << i;
    if (fast) {
      EXPECT_NEAR(fast->distance, slow->distance, 1e-6);
    }
  }
}

TEST(Camera, CenterPixelLooksForward) {
  Camera cam;
  cam.position = {1, 2, 3};
  cam.look_at = {4, -1, 0.5};
  cam.width = 201;
  cam.height = 101;
  const Ray r = pixel_to_ray(cam, {100, 50});
  EXPECT_NEAR(length(r.direction - cam.forward()), 0.0, 1e-9);
}

TEST(Camera, CornerPixelClosedForm) {
  // 90° vertical fov on a square image: focal = H/2. Pixel (0,0) has its center
  // half a pixel in from the corner, so the camera-frame direction is
  // (-(W/2 - 0.5), H/2 - 0.5, H/2) before normalization.
  Camera cam;
  cam.position = {0, 0, 0};
  cam.look_at = {0, 1, 0};
  cam.up = {0, 0, 1};
  cam.vertical_fov = std::acos(-1.0) / 2;
  cam.width = cam.height = 100;
  const Ray r = pixel_to_ray(cam, {0, 0});
  const double x = -49.5, y = 49.5, f = 50.0;
  const double n = std::sqrt(x * x + y * y + f * f);
  // Camera frame: right = +x world, up = +z world, forward = +y world.
  EXPECT_NEAR(r.direction.x, x / n, 1e-12);
  EXPECT_NEAR(r.direction.y, f / n, 1e-12);
  EXPECT_NEAR(r.direction.z, y / n, 1e-12);
  // Image corner itself sits at exactly 45° elevation.
  const Ray corner = image_point_to_ray(cam, {50, 0});
  EXPECT_NEAR(std::atan2(corner.direction.z, corner.direction.y), std::acos(-1.0) / 4, 1e-12);
  EXPECT_THROW(pixel_to_ray(cam, {100, 0}), GeometryError);
  EXPECT_THROW(pixel_to_ray(cam, {0, -1}), GeometryError);
}

TEST(Camera, ProjectionRoundTrip) {
  Camera cam;
  cam.position = {-2, -2, 1.5};
  cam.look_at = {0.5, 0.3, 0.2};
  cam.width = 320;
  cam.height = 240;
  Rng rng(12);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const Vec3 w{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-1, 3)};
    const auto ip = project(cam, w);
    if (!ip) continue;
    const auto px = to_pixel(cam, *ip);
    if (!px) continue;
    EXPECT_LE(std::abs(ip->x - (px->u + 0.5)), 0.5);
    EXPECT_LE(std::abs(ip->y - (px->v + 0.5)), 0.5);
    const Ray r = image_point_to_ray(cam, *ip);
    const double t = length(w - cam.position);
    EXPECT_NEAR(length(r.origin + r.direction * t - w), 0.0, 1e-6);
    ++checked;
  }
  EXPECT_GT(checked, 100);
  EXPECT_FALSE(project(cam, cam.position - cam.forward()).has_value());
}

TEST(Camera, DegenerateCamerasRejected) {
  Camera cam;
  cam.position = {0, 0, 0};
  cam.look_at = {0, 0, 0};
  EXPECT_THROW(cam.validate(), GeometryError);
  cam.look_at = {0, 0, -1};
  cam.up = {0, 0, 1};
  EXPECT_THROW(cam.validate(), GeometryError);
  PanoCamera pano;
  pano.width = 300;
  EXPECT_THROW(pano.validate(), GeometryError);
}

TEST(Collision, CubeOffsets) {
  const std::vector<PosedMesh> scene{posed("a", unit_cube_at({0, 0, 0.5}))};
  EXPECT_FALSE(check_collision(posed("b", unit_cube_at({3, 0, 0.5})), scene).colliding());
  const auto r = check_collision(posed("b", unit_cube_at({0.5, 0, 0.5})), scene);
  ASSERT_TRUE(r.colliding());
  EXPECT_EQ(r.contacts[0].element_id, "a");
  EXPECT_NEAR(r.contacts[0].penetration, 0.5, 1e-12);
  EXPECT_EQ(r.contacts[0].axis, 0);
}

TEST(Collision, RestingContactIsAllowed) {
  const std::vector<PosedMesh> scene{posed("a", unit_cube_at({0, 0, 0.5}))};
  EXPECT_FALSE(check_collision(posed("b", unit_cube_at({0, 0, 1.5})), scene).colliding());
  EXPECT_FALSE(check_collision(posed("b", unit_cube_at({0.3, 0.2, 1.5})), scene).colliding());
  EXPECT_FALSE(check_collision(posed("b", unit_cube_at({0, 0, 1.5 - 0.0005})), scene).colliding());
  EXPECT_TRUE(check_collision(posed("b", unit_cube_at({0, 0, 1.5 - 0.01})), scene).colliding());
}

TEST(Collision, ContainedMeshIsCaughtByWinding) {
  const std::vector<PosedMesh> scene{posed("big", make_box({-1, -1, 0}, {1, 1, 2}))};
  const auto small = make_box({-0.1, -0.1, 0.5}, {0.1, 0.1, 0.7});
  EXPECT_FALSE(brute_triangles_cross(scene[0].mesh, small));
  EXPECT_TRUE(check_collision(posed("small", small), scene).colliding());
  EXPECT_NEAR(winding_number(scene[0].mesh, {0, 0, 1}), 1.0, 1e-9);
  EXPECT_NEAR(winding_number(scene[0].mesh, {3, 0, 1}), 0.0, 1e-9);
}

TEST(Collision, SymmetricAndAgreesWithTriangleOracle) {
  Rng rng(21);
  const auto table = fixtures::table_mesh(1.0, 0.6, 0.75, 0.04, 0.05);
  for (int i = 0; i < 150; ++i) {
    Placement pa, pb;
    pa.position = {rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6), 0};
    pa.rotation_z = rng.uniform(0, 6.28);
    pb.position = {rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6), rng.uniform(0, 0.9)};
    pb.rotation_z = rng.uniform(0, 6.28);
    const auto a = table.transformed(pa);
    const auto b = make_box({-0.15, -0.1, 0}, {0.15, 0.1, 0.2}).transformed(pb);
    const bool ab = check_collision(posed("b", b), std::vector<PosedMesh>{posed("a", a)}).colliding();
    const bool ba = check_collision(posed("a", a), std::vector<PosedMesh>{posed("b", b)}).colliding();
    EXPECT_EQ(ab, ba) << i;
    // Collision-free under the checker implies no triangle-level crossing.
    if (!ab) {
      EXPECT_FALSE(brute_triangles_cross(a, b)) << i;
    }
  }
}

TEST(Surfaces, UnitCubeHasItsTop) {
  const auto s = detect_placeable_surfaces(make_box({-0.5, -0.5, 0}, {0.5, 0.5, 1}));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s[0].area, 1.0, 1e-12);
  EXPECT_NEAR(s[0].height_z, 1.0, 1e-12);
  ASSERT_EQ(s[0].boundary.size(), 1u);
  EXPECT_NEAR(oracle::shoelace(s[0].boundary[0]), 1.0, 1e-12);
}

TEST(Surfaces, TiltedCubeHasNone) {
  EXPECT_TRUE(detect_placeable_surfaces(fixtures::rotate_x(make_box({-0.5, -0.5, 0}, {0.5, 0.5, 1}), 15)).empty());
  EXPECT_TRUE(detect_placeable_surfaces(make_uv_sphere({0, 0, 0}, 0.5, 12, 16)).empty());
}

TEST(Surfaces, BookcaseShelves) {
  const auto mesh = fixtures::bookcase_mesh(0.8, 0.3, {0.1, 0.6, 1.1}, 0.02);
  const auto s = detect_placeable_surfaces(mesh);
  const auto o = oracle::brute_surfaces(mesh, 0.0025, 10.0, 0.005);
  ASSERT_EQ(s.size(), 3u);
  ASSERT_EQ(o.size(), 3u);
  std::multiset<double> heights;
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(s[i].area, 0.24, 0.0024);
    EXPECT_NEAR(s[i].area, o[i].area, 1e-9);
    heights.insert(std::round(s[i].height_z * 1000) / 1000);
  }
  EXPECT_EQ(heights, (std::multiset<double>{0.1, 0.6, 1.1}));
}

TEST(Surfaces, RotationConsistent) {
  const auto mesh = fixtures::table_mesh(1.2, 0.8, 0.75, 0.04, 0.04);
  const auto base = detect_placeable_surfaces(mesh);
  ASSERT_FALSE(base.empty());
  for (double deg : {17.0, 90.0, 133.0}) {
    const auto rot = detect_placeable_surfaces(rotate_z(mesh, deg * std::acos(-1.0) / 180));
    ASSERT_EQ(rot.size(), base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      EXPECT_NEAR(rot[i].area, base[i].area, 1e-9 * base[i].area);
      EXPECT_NEAR(rot[i].height_z, base[i].height_z, 1e-12);
    }
  }
}

TEST(Surfaces, TotalAreaBoundedByHorizontalArea) {
  for (const auto& r : fixtures::receptacle_corpus()) {
    double horizontal = 0;
    for (std::size_t i = 0; i < r.mesh.triangle_count(); ++i) {
      if (r.mesh.normals()[i].z > std::cos(10.0 * std::acos(-1.0) / 180)) horizontal += r.mesh.areas()[i];
    }
    double total = 0;
    for (const auto& s : detect_placeable_surfaces(r.mesh)) total += s.area;
    EXPECT_LE(total, horizontal + 1e-12) << r.name;
  }
}

TEST(Surfaces, DisconnectedCoplanarShelvesStaySeparate) {
  std::vector<TriangleMesh> parts{make_box({0, 0, 0}, {0.5, 0.5, 0.5}), make_box({1, 0, 0}, {1.5, 0.5, 0.5})};
  const auto s = detect_placeable_surfaces(TriangleMesh::merge(parts));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0].area, 0.25, 1e-12);
}

TEST(Surfaces, Membership) {
  const auto cube = detect_placeable_surfaces(make_box({-0.5, -0.5, 0}, {0.5, 0.5, 1}));
  EXPECT_EQ(surface_membership(cube, {0.1, 0.1, 1.0}), std::optional<std::size_t>(0));
  EXPECT_FALSE(surface_membership(cube, {0.1, 0.1, 0.5}).has_value());
  EXPECT_FALSE(surface_membership(cube, {0.7, 0.1, 1.0}).has_value());
  EXPECT_FALSE(surface_membership(cube, {0.45, 0.1, 1.0}, 0.1).has_value());

  const auto shelves = detect_placeable_surfaces(fixtures::bookcase_mesh(0.8, 0.3, {0.1, 0.6, 1.1}, 0.02));
  for (std::size_t i = 0; i < shelves.size(); ++i) {
    const Vec3 p{0.4 - 0.001, 0.0, shelves[i].height_z};
    const std::vector<Vec2> board{{-0.4, -0.15}, {0.4, -0.15}, {0.4, 0.15}, {-0.4, 0.15}};
    ASSERT_TRUE(oracle::point_in_polygon(board, {p.x, p.y}));
    EXPECT_EQ(surface_membership(shelves, p), std::optional<std::size_t>(i));
  }
}

TEST(Surfaces, SmallestMatchingSurfaceWins) {
  // A thin box on a bigger one: both tops lie within z_tol of the query point.
  std::vector<TriangleMesh> parts{make_box({-1, -1, 0}, {1, 1, 0.5}), make_box({-0.2, -0.2, 0.5}, {0.2, 0.2, 0.5 + 0.003})};
  const auto s = detect_placeable_surfaces(TriangleMesh::merge(parts));
  ASSERT_EQ(s.size(), 2u);
  const auto m = surface_membership(s, {0, 0, 0.503});
  ASSERT_TRUE(m.has_value());
  EXPECT_NEAR(s[*m].area, 0.16, 1e-12);
}
