#pragma once

#include <utility>

#include "mvie/greens.hpp"
#include "mvie/grid.hpp"
#include "mvie/media.hpp"
#include "mvie/types.hpp"

namespace mvie {

// Linearly polarized plane wave: E = i k0 (d x p) x d exp(i k0 d.x),
// H = i k0^2/(omega mu0) (d x p) exp(i k0 d.x). Throws BadDirection unless
// |d| = 1 within 1e-12.
std::pair<CVec3, CVec3> incident_plane(const MediumSpec& m, const Vec3& d, const Vec3& p,
                                       const Vec3& x);

// Analytic point source: columns of the radiating tensor, E = G_EE(x-z) p,
// H = G_HE(x-z) p. Never evaluated through the grid kernel.
std::pair<CVec3, CVec3> incident_point_dipole(const MediumSpec& m, const Vec3& z,
                                              const Vec3& p, const Vec3& x);

// Same generators sampled at every voxel center.
Field incident_plane_field(const MediumSpec& m, const Vec3& d, const Vec3& p,
                           const VoxelDomain& domain);
Field incident_point_dipole_field(const MediumSpec& m, const Vec3& z, const Vec3& p,
                                  const VoxelDomain& domain);

}  // namespace mvie
