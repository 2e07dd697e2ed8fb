#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <mvie/grid.hpp>

using namespace mvie;

TEST_CASE("sphere volume within two percent") {
  const VoxelDomain dom = rasterize(ShapeSpec::sphere(1.0), 1.0 / 16.0);
  const double exact = 4.0 * kPi / 3.0;
  CHECK(dom.occupied_volume() >= 0.98 * exact);
  CHECK(dom.occupied_volume() <= 1.02 * exact);
  CHECK(dom.chi.minCoeff() >= 0.0);
  CHECK(dom.chi.maxCoeff() <= 1.0);
}

TEST_CASE("lattice-aligned box has binary occupancy") {
  const double h = 0.125;
  const VoxelDomain dom = rasterize(ShapeSpec::box(Vec3(0.5, 0.5, 0.5)), h);
  for (Eigen::Index i = 0; i < dom.size(); ++i)
    CHECK((dom.chi[i] == 0.0 || dom.chi[i] == 1.0));
  CHECK(dom.occupied_volume() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("under-resolved shape is rejected") {
  CHECK_THROWS_AS(rasterize(ShapeSpec::sphere(0.1), 0.1), DegenerateShape);
}

TEST_CASE("shifting by one spacing shifts chi by one index") {
  const double h = 0.125;
  const VoxelDomain a = rasterize(ShapeSpec::sphere(1.0), h);
  const VoxelDomain b = rasterize(ShapeSpec::sphere(1.0, Vec3(h, 0, 0)), h);
  CHECK(a.dims == b.dims);
  CHECK((b.origin - a.origin - Vec3(h, 0, 0)).norm() <= 1e-14);
  CHECK((a.chi - b.chi).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("chi is sharp away from the boundary") {
  const double h = 0.125;
  const VoxelDomain dom = rasterize(ShapeSpec::sphere(1.0), h);
  const double band = h * std::sqrt(3.0) / 2.0;
  for (Eigen::Index i = 0; i < dom.size(); ++i) {
    const double r = dom.center(i).norm();
    if (r < 1.0 - band) CHECK(dom.chi[i] == 1.0);
    if (r > 1.0 + band) CHECK(dom.chi[i] == 0.0);
  }
}

TEST_CASE("support is strictly inside the box") {
  const VoxelDomain dom = rasterize(ShapeSpec::ellipsoid(Vec3(0.8, 0.5, 0.6)), 0.1);
  for (int i = 0; i < dom.dims[0]; ++i)
    for (int j = 0; j < dom.dims[1]; ++j)
      for (int k = 0; k < dom.dims[2]; ++k) {
        const bool rim = i == 0 || j == 0 || k == 0 || i == dom.dims[0] - 1 ||
                         j == dom.dims[1] - 1 || k == dom.dims[2] - 1;
        if (rim) CHECK(dom.chi[dom.flat(i, j, k)] == 0.0);
      }
}

TEST_CASE("fixed-lattice rasterization matches") {
  const VoxelDomain a = rasterize(ShapeSpec::sphere(0.7), 0.1);
  const VoxelDomain b = rasterize_onto(ShapeSpec::sphere(0.7), a.origin, a.h, a.dims);
  CHECK((a.chi - b.chi).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("two-spheres support splits") {
  const ShapeSpec pair = ShapeSpec::two_spheres(0.4, Vec3(-0.8, 0, 0), 0.4, Vec3(0.8, 0, 0));
  const VoxelDomain dom = rasterize(pair, 0.1);
  CHECK(dom.occupied_volume() ==
        doctest::Approx(2.0 * 4.0 * kPi / 3.0 * 0.4 * 0.4 * 0.4).epsilon(0.02));
  CHECK(!pair.contains(Vec3(0, 0, 0)));
  CHECK(pair.contains(Vec3(0.8, 0, 0)));
}

TEST_CASE("probe points on a sphere of directions") {
  const VoxelDomain dom = rasterize(ShapeSpec::sphere(1.0), 0.125);
  ProbeSpec spec;
  spec.kind = ProbeSpec::Kind::SphereSet;
  spec.R = 10.0;
  spec.N = 6;
  const auto pts = exterior_points(dom, spec);
  REQUIRE(pts.size() == 6);
  const Vec3 c = dom.centroid();
  for (const Vec3& x : pts) CHECK((x - c).norm() == doctest::Approx(10.0).epsilon(1e-12));
  // N = 6 is the axis set.
  for (int axis = 0; axis < 3; ++axis)
    for (double s : {1.0, -1.0}) {
      Vec3 want = c;
      want[axis] += 10.0 * s;
      const bool found = std::any_of(pts.begin(), pts.end(), [&](const Vec3& x) {
        return (x - want).norm() < 1e-9;
      });
      CHECK(found);
    }
}

TEST_CASE("probe points along a ray") {
  const VoxelDomain dom = rasterize(ShapeSpec::sphere(1.0), 0.125);
  ProbeSpec spec;
  spec.kind = ProbeSpec::Kind::Ray;
  spec.dir = Vec3::UnitX();
  spec.d0 = 0.5;
  spec.levels = 4;
  const auto pts = exterior_points(dom, spec);
  REQUIRE(pts.size() == 4);
  for (int i = 0; i < 4; ++i) {
    const double d = 0.5 * std::pow(2.0, -i);
    CHECK((pts[i] - Vec3(1.0 + d, 0, 0)).norm() <= 1e-12);
  }

  spec.levels = 5;  // last distance 0.03125 < h/2
  CHECK_THROWS_AS(exterior_points(dom, spec), ProbeInsideDomain);
}
