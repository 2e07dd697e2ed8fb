#include "mvie/fields.hpp"

#include <cmath>

namespace mvie {

namespace {
void require_unit(const Vec3& d) {
  if (std::abs(d.norm() - 1.0) > 1e-12) throw BadDirection();
}
}  // namespace

std::pair<CVec3, CVec3> incident_plane(const MediumSpec& m, const Vec3& d, const Vec3& p,
                                       const Vec3& x) {
  require_unit(d);
  const double k0 = m.k0();
  const Cplx phase = std::exp(kI * (k0 * d.dot(x)));
  const Vec3 dxp = d.cross(p);
  const CVec3 E = (kI * k0 * phase) * dxp.cross(d).cast<Cplx>();
  const CVec3 H = (kI * (k0 * k0 / (m.omega * m.mu0)) * phase) * dxp.cast<Cplx>();
  return {E, H};
}

std::pair<CVec3, CVec3> incident_point_dipole(const MediumSpec& m, const Vec3& z,
                                              const Vec3& p, const Vec3& x) {
  const CMat6 G = dyadic_green_column(m, x - z);
  const CVec3 pc = p.cast<Cplx>();
  return {G.block<3, 3>(0, 0) * pc, G.block<3, 3>(3, 0) * pc};
}

Field incident_plane_field(const MediumSpec& m, const Vec3& d, const Vec3& p,
                           const VoxelDomain& domain) {
  require_unit(d);
  const double k0 = m.k0();
  const CVec3 Eamp = (kI * k0) * d.cross(p).cross(d).cast<Cplx>();
  const CVec3 Hamp = (kI * (k0 * k0 / (m.omega * m.mu0))) * d.cross(p).cast<Cplx>();
  Field f(6, domain.size());
  for (Eigen::Index v = 0; v < domain.size(); ++v) {
    const Cplx phase = std::exp(kI * (k0 * d.dot(domain.center(v))));
    f.col(v).head<3>() = phase * Eamp;
    f.col(v).tail<3>() = phase * Hamp;
  }
  return f;
}

Field incident_point_dipole_field(const MediumSpec& m, const Vec3& z, const Vec3& p,
                                  const VoxelDomain& domain) {
  Field f(6, domain.size());
  for (Eigen::Index v = 0; v < domain.size(); ++v) {
    const auto [E, H] = incident_point_dipole(m, z, p, domain.center(v));
    f.col(v).head<3>() = E;
    f.col(v).tail<3>() = H;
  }
  return f;
}

}  // namespace mvie
