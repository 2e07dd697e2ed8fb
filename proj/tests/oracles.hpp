#pragma once

// Slow reference implementations the fast paths are tested against. These
// stay deliberately naive: direct summation, dense matrices, quadrature.

#include <Eigen/Dense>
#include <mvie/greens.hpp>
#include <mvie/grid.hpp>
#include <mvie/media.hpp>
#include <mvie/types.hpp>

namespace mvie::oracles {

// Dense 6N x 6N matrix of the lattice Green map: pairwise analytic columns
// plus the equivalent-ball self block. Source masking (chi h^3) is NOT
// folded in.
Eigen::MatrixXcd dense_dyadic_matrix(const MediumSpec& m, const VoxelDomain& dom);

// Direct summation matching dyadic_green_apply (mask, then dense matrix).
Field dense_dyadic_apply(const MediumSpec& m, const VoxelDomain& dom, const Field& f);

// Direct summation matching newtonian_apply.
CVecX dense_newtonian_apply(double k0, const VoxelDomain& dom, const CVecX& f);

// Self integral by 64-point Gauss-Legendre quadrature of the radial integrand.
Cplx self_term_quadrature(double k0, double h);

}  // namespace mvie::oracles
