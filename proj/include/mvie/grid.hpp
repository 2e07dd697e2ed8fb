#pragma once

#include <array>
#include <vector>

#include "mvie/errors.hpp"
#include "mvie/types.hpp"

namespace mvie {

struct ShapeSpec {
  enum class Kind { Sphere, Ellipsoid, Box, TwoSpheres };
  Kind kind = Kind::Sphere;
  Vec3 center = Vec3::Zero();
  // Sphere: radii.x(). Ellipsoid: semi-axes. Box: half-widths.
  Vec3 radii = Vec3::Ones();
  // Second component of a two-spheres shape; components must be disjoint.
  Vec3 center2 = Vec3::Zero();
  double radius2 = 0.0;

  static ShapeSpec sphere(double r, const Vec3& c = Vec3::Zero());
  static ShapeSpec ellipsoid(const Vec3& semi, const Vec3& c = Vec3::Zero());
  static ShapeSpec box(const Vec3& half, const Vec3& c = Vec3::Zero());
  static ShapeSpec two_spheres(double r1, const Vec3& c1, double r2, const Vec3& c2);

  bool contains(const Vec3& x) const;
  // Lower bound on the distance from an exterior point to the shape
  // (exact for sphere, box and two-spheres).
  double exterior_distance(const Vec3& x) const;
  // Point where the ray c + t*dir (t > 0) leaves the shape, used to anchor
  // probe rays on the boundary.
  Vec3 boundary_along(const Vec3& dir) const;
  Vec3 bbox_min() const;
  Vec3 bbox_max() const;
  double min_feature() const;  // smallest radius / half-width
};

// Cubic lattice with per-voxel occupancy fractions. Layout is row-major with
// the z index fastest; voxel centers sit at origin + h*(i+1/2, j+1/2, k+1/2).
struct VoxelDomain {
  Vec3 origin = Vec3::Zero();
  double h = 0.0;
  std::array<int, 3> dims = {0, 0, 0};
  VecX chi;
  ShapeSpec shape;

  Eigen::Index size() const { return static_cast<Eigen::Index>(dims[0]) * dims[1] * dims[2]; }
  Eigen::Index flat(int i, int j, int k) const {
    return (static_cast<Eigen::Index>(i) * dims[1] + j) * dims[2] + k;
  }
  Vec3 center(int i, int j, int k) const {
    return origin + h * Vec3(i + 0.5, j + 0.5, k + 0.5);
  }
  Vec3 center(Eigen::Index flat_idx) const {
    const int k = static_cast<int>(flat_idx % dims[2]);
    const int j = static_cast<int>((flat_idx / dims[2]) % dims[1]);
    const int i = static_cast<int>(flat_idx / (static_cast<Eigen::Index>(dims[1]) * dims[2]));
    return center(i, j, k);
  }
  double occupied_volume() const { return chi.sum() * h * h * h; }
  // Occupancy-weighted centroid of the support.
  Vec3 centroid() const;
  // Distance from x to the nearest occupied voxel center.
  double support_distance(const Vec3& x) const;
};

// Samples subcell occupancy fractions on a lattice sized from the shape's
// bounding box plus `margin` empty cells, origin snapped to multiples of h so
// that shifting the shape by exactly h shifts chi by one index.
// Throws DegenerateShape when the smallest feature is under 2h.
VoxelDomain rasterize(const ShapeSpec& shape, double h, int margin = 2);

// Same sampling on a caller-fixed lattice (shared grids between shapes).
VoxelDomain rasterize_onto(const ShapeSpec& shape, const Vec3& origin, double h,
                           const std::array<int, 3>& dims);

struct ProbeSpec {
  enum class Kind { SphereSet, Ray };
  Kind kind = Kind::Ray;
  // SphereSet: N quasi-uniform directions at radius R around the support
  // centroid; N = 6 yields the axis directions.
  double R = 10.0;
  int N = 6;
  // Ray: points at distances {d0 * 2^-i, i < levels} outside the boundary
  // along dir from the shape's boundary anchor.
  Vec3 dir = Vec3::UnitX();
  double d0 = 0.5;
  int levels = 4;
};

// Generates exterior evaluation points; throws ProbeInsideDomain if any
// requested point would land within h/2 of the support.
std::vector<Vec3> exterior_points(const VoxelDomain& domain, const ProbeSpec& spec);

}  // namespace mvie
