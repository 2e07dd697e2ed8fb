#include "mvie/inverse.hpp"

#include <cmath>

#include "mvie/fields.hpp"
#include "mvie/greens.hpp"

namespace mvie {

namespace {

SolveReport slim(SolveReport rep) {
  rep.u.resize(6, 0);
  return rep;
}

}  // namespace

IncidentSet default_incident_set() {
  IncidentSet set;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j)
      for (int k = -1; k <= 1; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        set.directions.push_back(Vec3(i, j, k).normalized());
      }
  return set;
}

DiscriminationReport discriminate(const ShapeSpec& shape1, const ShapeSpec& shape2,
                                  const MediumSpec& m1, const MediumSpec& m2,
                                  const IncidentSet& incidents, double h, int margin,
                                  double tol, int maxit, int farfield_dirs,
                                  double threshold) {
  if (!check_regime(m1).pass() || !check_regime(m2).pass())
    throw RegimeViolation("discrimination requires admissible media");
  if (incidents.directions.empty())
    throw DimensionMismatch("incident set is empty");

  // Shared lattice over the union bounding box keeps one kernel table per k0.
  const Vec3 lo = shape1.bbox_min().cwiseMin(shape2.bbox_min());
  const Vec3 hi = shape1.bbox_max().cwiseMax(shape2.bbox_max());
  std::array<int, 3> dims;
  Vec3 origin;
  for (int c = 0; c < 3; ++c) {
    const int lo_cell = static_cast<int>(std::floor(lo[c] / h)) - margin;
    const int hi_cell = static_cast<int>(std::ceil(hi[c] / h)) + margin;
    origin[c] = lo_cell * h;
    dims[c] = hi_cell - lo_cell;
  }
  const VoxelDomain dom1 = rasterize_onto(shape1, origin, h, dims);
  const VoxelDomain dom2 = rasterize_onto(shape2, origin, h, dims);

  const auto table1 = std::make_shared<const KernelTable>(
      make_kernel_table(m1.k0(), h, dims));
  const auto table2 = m2.k0() == m1.k0()
                          ? table1
                          : std::make_shared<const KernelTable>(
                                make_kernel_table(m2.k0(), h, dims));
  const LSOperator op1 = make_ls_operator(dom1, table1, m1);
  const LSOperator op2 = make_ls_operator(dom2, table2, m2);

  DiscriminationReport rep;
  rep.shape1 = shape1;
  rep.shape2 = shape2;
  rep.incidents = incidents;
  const std::vector<Vec3> ffdirs = fibonacci_directions(farfield_dirs);

  for (std::size_t a = 0; a < incidents.directions.size(); ++a) {
    const Vec3& d = incidents.directions[a];
    const SolveReport s1 =
        solve_krylov(op1, incident_plane_field(m1, d, incidents.polarization, dom1),
                     tol, maxit);
    const SolveReport s2 =
        solve_krylov(op2, incident_plane_field(m2, d, incidents.polarization, dom2),
                     tol, maxit);
    const FarField f1 = far_field(op1, s1, ffdirs);
    const FarField f2 = far_field(op2, s2, ffdirs);
    const double den = f1.values.topRows<3>().norm();
    const double gap = (f1.values.topRows<3>() - f2.values.topRows<3>()).norm();
    rep.deltas.push_back(den > 0.0 ? gap / den : gap);
    // Far-field extraction bias is common to both shapes and cancels in the
    // gap; the noise floor for delta is set by how far the solves were pushed.
    for (const SolveReport* s : {&s1, &s2})
      if (!s->residuals.empty())
        rep.cross_validation_error =
            std::max(rep.cross_validation_error, s->residuals.back());
    rep.solves1.push_back(slim(s1));
    rep.solves2.push_back(slim(s2));
    rep.delta = std::max(rep.delta, rep.deltas.back());
  }
  rep.threshold = threshold > 0.0 ? threshold : 10.0 * rep.cross_validation_error;
  rep.same = rep.delta <= rep.threshold;
  return rep;
}

ProbeExperiment probe_blowup(const ShapeSpec& shape, const MediumSpec& m, double h,
                             int margin, const ProbeSpec& ray, const Vec3& p,
                             double tol, int maxit) {
  if (ray.kind != ProbeSpec::Kind::Ray)
    throw ConfigError("probe_blowup needs a ray probe");
  const VoxelDomain dom = rasterize(shape, h, margin);
  const auto table =
      std::make_shared<const KernelTable>(make_kernel_table(m.k0(), h, dom.dims));
  const LSOperator op = make_ls_operator(dom, table, m);

  ProbeExperiment exp;
  exp.shape = shape;
  exp.polarization = p;
  const Vec3 dir = ray.dir.normalized();
  const Vec3 anchor = shape.boundary_along(dir);

  std::vector<double> ds;
  for (int i = 0; i < ray.levels; ++i) {
    const double d = ray.d0 * std::pow(2.0, -i);
    if (d <= 2.0 * h) {
      exp.resolution_limited = true;
      continue;
    }
    ds.push_back(d);
  }
  if (ds.size() < 2)
    throw TooCloseToSupport("fewer than two probe distances above the grid floor");

  for (double d : ds) {
    const Vec3 z = anchor + d * dir;
    const Field inc = incident_point_dipole_field(m, z, p, dom);
    SolveReport rep = solve_krylov(op, inc, tol, maxit);
    const CVec6 us = scattered_at(op, rep, z);
    exp.distances.push_back(d);
    exp.magnitudes.push_back(us.norm());
    exp.solves.push_back(slim(std::move(rep)));
  }

  // Least-squares slope of log|u_s| on log d with its standard error.
  const auto n = static_cast<double>(exp.distances.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < exp.distances.size(); ++i) {
    const double lx = std::log(exp.distances[i]), ly = std::log(exp.magnitudes[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  exp.exponent = (n * sxy - sx * sy) / denom;
  if (exp.distances.size() > 2) {
    const double b0 = (sy - exp.exponent * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < exp.distances.size(); ++i) {
      const double e =
          std::log(exp.magnitudes[i]) - (b0 + exp.exponent * std::log(exp.distances[i]));
      ss += e * e;
    }
    exp.exponent_stderr = std::sqrt(ss / (n - 2.0) / (sxx - sx * sx / n));
  }
  return exp;
}

}  // namespace mvie
