#pragma once

#include "mvie/errors.hpp"
#include "mvie/types.hpp"

namespace mvie {

// Homogeneous medium occupying the scatterer, embedded in (eps0, mu0) background,
// moving at constant velocity V, driven at angular frequency omega.
struct MediumSpec {
  double eps0 = 1.0;
  double mu0 = 1.0;
  double eps = 1.0;
  double mu = 1.0;
  Vec3 V = Vec3::Zero();
  double omega = 1.0;
  // Resolution context for the second admissibility inequality (cells per
  // wavelength factor); carried with the medium so run records are complete.
  double cpw = 1.0;

  double c() const { return 1.0 / std::sqrt(eps0 * mu0); }
  // Interior wave speed; admissibility requires |V| < c_Omega < c.
  double c_Omega() const { return 1.0 / std::sqrt(eps * mu); }
  double k0() const { return omega * std::sqrt(eps0 * mu0); }
  double k() const { return omega * std::sqrt(eps * mu); }
};

// Flat record of both admissibility inequalities; a failed regime is a valid
// report, not an error.
struct RegimeReport {
  double lhs1 = 0.0;
  bool pass1 = false;
  double lhs2 = 0.0;
  bool pass2 = false;
  double c = 0.0;
  double c_Omega = 0.0;
  double normT = 0.0;
  double normCplusT = 0.0;
  bool pass() const { return pass1 && pass2; }
};

// Skew matrix of the cross product: cross_matrix(V) * w == V x w.
Mat3 cross_matrix(const Vec3& v);

// Velocity coupling block matrix [[0, mu0 (eps/eps0) Vx], [-eps0 (mu/mu0) Vx, 0]].
CMat6 assemble_T(const MediumSpec& m);

// Counter-coupling block matrix [[0, -(1/c^2)(1/eps0)(mu0/mu) Vx],
//                                [ (1/c^2)(1/mu0)(eps0/eps) Vx, 0]].
CMat6 assemble_C(const MediumSpec& m);

// B = (I - T)^{-1} - I by direct inversion. Throws RegimeViolation if ||T|| >= 1.
CMat6 assemble_B(const MediumSpec& m);

// Same B through the truncated geometric series T + T^2 + ..., stopping once the
// tail bound ||T||^{n+1}/(1-||T||) drops below tol. Test oracle path.
CMat6 assemble_B_series(const MediumSpec& m, double tol);

// Diagonal contrast diag((eps/eps0-1) I3, (mu/mu0-1) I3).
CMat6 contrast_diag(const MediumSpec& m);

// Diagonal ratios diag((eps/eps0) I3, (mu/mu0) I3).
CMat6 ratio_diag(const MediumSpec& m);

// Full coupling matrix M = contrast_diag + (I-T)^{-1}(C+T) ratio_diag.
CMat6 assemble_M(const MediumSpec& m);

// M with (I-T)^{-1} replaced by the series I + T + ... + T^J (consistent
// truncation used by the fused solver path).
CMat6 assemble_M_truncated(const MediumSpec& m, int J);

// Closed-form spectral norms (block-skew structure makes them exact maxima).
double norm_T(const MediumSpec& m);
double norm_CplusT(const MediumSpec& m);

// Series cutoff J with tail ||T||^{J+1}/(1-||T||) < tol. Returns 0 when V = 0.
int series_cutoff(const MediumSpec& m, double tol);

// Evaluates both admissibility inequalities: lhs1 = max{mu0 eps/eps0, eps0 mu/mu0}|V| < 1
// and lhs2 = cpw (1 - c_Omega/c) max{eps/eps0, mu/mu0} max{1, w eps0, w mu0,
// w(eps-eps0), w(mu-mu0), w^2 eps0 mu0 max{eps/eps0-1, mu/mu0-1}} < 1/2.
RegimeReport check_regime(const MediumSpec& m, double cpw = 1.0);

}  // namespace mvie
