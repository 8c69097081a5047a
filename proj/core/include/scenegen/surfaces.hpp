#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scenegen/mesh.hpp"

namespace scenegen {

/// A cluster of near-horizontal, upward-facing triangles that can hold objects.
struct PlaceableSurface {
  std::string owner;  // element id when detected on a scene instance; empty for a bare mesh
  std::vector<std::uint32_t> triangle_ids;
  double height_z = 0.0;  // mean z of the member vertices
  double area = 0.0;
  /// Boundary loops in the z = height plane. Outer loops run counterclockwise, holes clockwise.
  std::vector<std::vector<Vec2>> boundary;
};

struct SurfaceOptions {
  double min_area = 0.0025;    // m²
  double height_tol = 0.005;   // m, max z spread inside one cluster
  double max_tilt_deg = 10.0;  // strict bound on normal deviation from +z
};

/// Triangles whose normal deviates from +z by less than max_tilt_deg are grown
/// into clusters over shared edges while the cluster's z-range stays within
/// height_tol. Clusters under min_area are dropped. Sorted by descending area.
std::vector<PlaceableSurface> detect_placeable_surfaces(const TriangleMesh& mesh,
                                                        const SurfaceOptions& options = {});

/// Index of the surface whose boundary contains point.xy (at least xy_margin
/// from the edge) and whose height is within z_tol. Among several matches the
/// smallest area wins.
std::optional<std::size_t> surface_membership(std::span<const PlaceableSurface> surfaces, const Vec3& point,
                                              double xy_margin = 0.0, double z_tol = 0.01);

/// Even-odd containment over all boundary loops.
bool boundary_contains(const std::vector<std::vector<Vec2>>& loops, Vec2 p);
double boundary_distance(const std::vector<std::vector<Vec2>>& loops, Vec2 p);

}  // namespace scenegen
