#pragma once

#include <string>
#include <vector>

#include "mvie/scatter.hpp"
#include "mvie/types.hpp"

namespace mvie {

// Radiation pattern sampled on a direction set; rows 0..2 hold E_inf and
// 3..5 hold H_inf per direction. Every instance satisfies transversality and
// H_inf = sqrt(eps0/mu0) theta x E_inf to 1e-6 relative (validated on build).
struct FarField {
  double k0 = 0.0;
  double omega = 0.0;
  double admittance = 0.0;  // background sqrt(eps0/mu0), ties H_inf to E_inf
  std::vector<Vec3> directions;
  Field values;
};

// Throws on invariant violation.
void validate_far_field(const FarField& ff, double tol = 1e-6);

// Scattered (E, H) at an exterior point by direct quadrature over occupied
// voxels with the analytic kernel. Throws TooCloseToSupport at dist <= h and
// NotConverged when the state carries an unconverged flag.
CVec6 scattered_at(const LSOperator& op, const SolveReport& state, const Vec3& x);

// 1/|x| far-field coefficient of the scattered wave over a direction set.
FarField far_field(const LSOperator& op, const SolveReport& state,
                   const std::vector<Vec3>& dirs);

// Pointwise radiation-condition defect |theta x H + sqrt(eps0/mu0) E|.
double silver_muller_defect(const MediumSpec& m, const Vec3& theta, const CVec3& E,
                            const CVec3& H);

struct SilverMullerReport {
  std::vector<double> radii;
  std::vector<double> residuals;  // max defect over the direction sample
  double exponent = 0.0;          // fitted log-log decay slope
};

SilverMullerReport silver_muller_residual(const LSOperator& op, const SolveReport& state,
                                          const std::vector<double>& radii,
                                          int ndirs = 48);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

// CSV round-trip: one row per direction, full double precision.
void save_farfield_csv(const FarField& ff, const std::string& path);
FarField load_farfield_csv(const std::string& path);

// JSON document with metadata plus per-direction component arrays.
void save_farfield_json(const FarField& ff, const std::string& path);

}  // namespace mvie
