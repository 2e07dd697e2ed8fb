#pragma once

#include <vector>

#include "mvie/farfield.hpp"
#include "mvie/media.hpp"
#include "mvie/types.hpp"

namespace mvie {

// Multipole coefficients for a homogeneous dielectric/magnetic sphere at rest.
// Computed from Riccati-Bessel recurrences, independent of the volume solver.
struct MieSolution {
  double radius = 0.0;
  double k0 = 0.0;
  double k = 0.0;                // interior wavenumber
  double impedance_ratio = 1.0;  // sqrt(mu_r / eps_r)
  int n_max = 0;
  std::vector<Cplx> an, bn;  // order n lives at [n-1]
  bool converged = false;    // trailing coefficients below 1e-12
};

MieSolution mie_coefficients(double radius, const MediumSpec& m);

// Far field of the sphere under the same plane wave incident_plane(m, d, pol)
// produces. Throws NotConverged when the multipole tail has not decayed.
FarField mie_far_field(double radius, const MediumSpec& m, const Vec3& d,
                       const Vec3& pol, const std::vector<Vec3>& dirs);

// Two-half-space tensor column (direct minus image source across z3 = 0):
// (E, H) = [G(x - z) - G(x - z_mirror)] (p, 0), both points in the upper half.
CVec6 image_green(const MediumSpec& m, const Vec3& x, const Vec3& z, const Vec3& p);

// Regular/irregular spherical Bessel values for orders 0..nmax. j is computed
// by downward recurrence (stable above order ~ x), y upward.
std::vector<double> spherical_bessel_j(int nmax, double x);
std::vector<double> spherical_bessel_y(int nmax, double x);

}  // namespace mvie
