#pragma once

#include <vector>

#include "mvie/farfield.hpp"
#include "mvie/grid.hpp"
#include "mvie/media.hpp"
#include "mvie/scatter.hpp"
#include "mvie/types.hpp"

namespace mvie {

// Boundary-probe experiment: a point dipole approaches the boundary and the
// scattered field is read back at the source location. Magnitudes grow like
// d^-3 for nonzero contrast.
struct ProbeExperiment {
  ShapeSpec shape;
  Vec3 polarization = Vec3::Zero();
  std::vector<double> distances;   // strictly decreasing, all above the grid floor
  std::vector<double> magnitudes;  // |u_s(z_i, z_i)|
  std::vector<SolveReport> solves;  // per-distance run records, fields dropped
  double exponent = 0.0;
  double exponent_stderr = 0.0;     // 1-sigma band half-width on the slope
  bool resolution_limited = false;  // probes below 2h were discarded
};

// Incident plane-wave family: one polarization seed shared by all directions
// (each wave uses its transverse projection).
struct IncidentSet {
  std::vector<Vec3> directions;
  Vec3 polarization = Vec3(0.3, -0.5, 0.8).normalized();
};

// The 26 lattice directions {-1,0,1}^3 minus the origin, normalized.
IncidentSet default_incident_set();

struct DiscriminationReport {
  ShapeSpec shape1, shape2;
  IncidentSet incidents;
  std::vector<double> deltas;  // per incident direction
  double delta = 0.0;          // max of deltas
  double cross_validation_error = 0.0;  // worst final solver residual
  double threshold = 0.0;
  bool same = false;
  std::vector<SolveReport> solves1, solves2;  // run records, fields dropped
};

// Forward-solves both shapes over the incident set on a shared lattice and
// compares far-field patterns; verdict at `threshold` (0 picks 10x the
// measured cross-validation error). Throws RegimeViolation when either medium
// fails admissibility.
DiscriminationReport discriminate(const ShapeSpec& shape1, const ShapeSpec& shape2,
                                  const MediumSpec& m1, const MediumSpec& m2,
                                  const IncidentSet& incidents, double h,
                                  int margin = 2, double tol = 1e-7, int maxit = 400,
                                  int farfield_dirs = 196, double threshold = 0.0);

// Dipole-probe ray toward the boundary; drops distances at or below 2h
// (resolution floor) and flags the truncation. Throws TooCloseToSupport when
// fewer than two probe distances survive.
ProbeExperiment probe_blowup(const ShapeSpec& shape, const MediumSpec& m, double h,
                             int margin, const ProbeSpec& ray, const Vec3& p,
                             double tol = 1e-7, int maxit = 400);

}  // namespace mvie
