#pragma once

#include <array>
#include <memory>
#include <string>

#include "mvie/fft3.hpp"
#include "mvie/grid.hpp"
#include "mvie/media.hpp"
#include "mvie/types.hpp"

namespace mvie {

// Scalar radial kernel -exp(ik|x|)/(4 pi |x|). Throws SingularPoint at x = 0.
Cplx phi_k(double k, const Vec3& x);

// Integral of phi_k over the ball of voxel-equivalent radius a = h (3/4pi)^{1/3}:
// -(exp(ik a)(1 - ik a) - 1)/k^2, continued to -a^2/2 at k = 0.
Cplx self_term(double k0, double h);

// Sampled-kernel spectra for fast aperiodic convolution on a lattice padded to
// twice the domain per axis. Holds the scalar kernel plus the nine independent
// entries of the 6x6 radiating tensor: six of the symmetric electric-electric
// block (omega-free, shared by the magnetic-magnetic block) and the three
// components of the curl-coupling vector g'(r) rhat.
struct KernelTable {
  double k0 = 0.0;
  double h = 0.0;
  std::array<int, 3> dims = {0, 0, 0};
  std::array<int, 3> padded = {0, 0, 0};
  Cplx self_cell;  // integral of phi_k over the equivalent ball
  CVecX scalar_hat;
  // xx, yy, zz, xy, xz, yz of k0^2 g I + Hess g (self cell baked in).
  std::array<CVecX, 6> ee_hat;
  // Components of g' rhat (zero at the origin).
  std::array<CVecX, 3> w_hat;
  std::shared_ptr<Fft3> fft;

  Eigen::Index padded_size() const {
    return static_cast<Eigen::Index>(padded[0]) * padded[1] * padded[2];
  }
};

KernelTable make_kernel_table(double k0, double h, const std::array<int, 3>& dims);

// Disk cache, keyed by (k0, h, dims) with a versioned binary header.
void save_kernel_table(const KernelTable& table, const std::string& path);
KernelTable load_kernel_table(const std::string& path);
std::string kernel_table_key(double k0, double h, const std::array<int, 3>& dims);

// Discrete volume potential: convolution of f*chi*h^3 with the scalar kernel.
CVecX newtonian_apply(const KernelTable& table, const VoxelDomain& domain, const CVecX& f);
Field newtonian_apply(const KernelTable& table, const VoxelDomain& domain, const Field& f);

// Second-derivative multiplier -xi_a xi_b fused onto the volume-potential
// spectrum (a single padded-torus pass; re-padding the potential would
// manufacture an artificial boundary).
CVecX newtonian_second_derivative(const KernelTable& table, const VoxelDomain& domain,
                                  const CVecX& f, int axis_a, int axis_b);

// Radiating 6x6 tensor applied to j*chi*h^3 as nine scalar convolutions.
Field dyadic_green_apply(const KernelTable& table, const MediumSpec& m,
                         const VoxelDomain& domain, const Field& j);

// Adjoint in the voxel inner product: conjugated spectra, swapped coupling
// factors, trailing chi*h^3 weighting.
Field dyadic_green_apply_adjoint(const KernelTable& table, const MediumSpec& m,
                                 const VoxelDomain& domain, const Field& j);

// Off-grid analytic tensor G(r): upper-left = lower-right =
// (k0^2 g I + Hess g)/omega, upper-right = +i mu0 g' [rhat]x,
// lower-left = -i eps0 g' [rhat]x. Throws SingularPoint at r = 0.
CMat6 dyadic_green_column(const MediumSpec& m, const Vec3& r);

// Voxel self-interaction: the tensor averaged over the equivalent ball,
// diagonal blocks ((2/3) k0^2 Ig - 1/3)/(omega h^3), curl blocks zero.
CMat6 dyadic_green_self(const MediumSpec& m, double h);

}  // namespace mvie
