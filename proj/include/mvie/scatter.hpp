#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mvie/fields.hpp"
#include "mvie/greens.hpp"
#include "mvie/grid.hpp"
#include "mvie/media.hpp"
#include "mvie/types.hpp"

namespace mvie {

// Bound state for one scattering configuration: medium, lattice, kernel table,
// both coupling-matrix forms and the series cutoff.
struct LSOperator {
  MediumSpec medium;
  const VoxelDomain* domain = nullptr;
  std::shared_ptr<const KernelTable> table;
  CMat6 M;        // closed form
  CMat6 M_J;      // series form truncated at J (fused solver path)
  int J = 0;
  double series_tol = 1e-14;
  double cpw = 1.0;
};

LSOperator make_ls_operator(const VoxelDomain& domain,
                            std::shared_ptr<const KernelTable> table,
                            const MediumSpec& medium, double series_tol = 1e-14,
                            double cpw = 1.0);

struct SolveReport {
  Field u;
  std::vector<double> residuals;
  double rho = 0.0;           // empirical contraction ratio (tail geometric mean)
  int iterations = 0;
  bool converged = false;
  std::string method;
  double norm_G_minus1 = -1.0;  // measured before fixed-point iteration only
  double wall_seconds = 0.0;
};

// Contrast-only branch: omega * G(diag-contrast * f).
Field apply_G_minus1(const LSOperator& op, const Field& f);

// Velocity branch j: omega * G(T^j (C+T) diag-ratio * f).
Field apply_G_j(const LSOperator& op, int j, const Field& f);

// Fused map f - omega * G(M_J f); one transform pass per call.
Field apply_LS(const LSOperator& op, const Field& f);

// Reference path f - G_{-1} f - sum_j G_j f; equals the fused path to 1e-12.
Field apply_LS_per_term(const LSOperator& op, const Field& f);

// Adjoint in the voxel inner product, for Krylov and norm estimation.
Field apply_LS_adjoint(const LSOperator& op, const Field& f);

// Largest singular value by 20 power-iteration steps on A^H A with a seeded
// Gaussian start.
double operator_norm_estimate(const std::function<Field(const Field&)>& apply,
                              const std::function<Field(const Field&)>& apply_adjoint,
                              Eigen::Index cols, int iters = 20,
                              std::uint64_t seed = 7);

// Fixed-point iteration u <- inc + (G_{-1} + sum G_j) u. Throws RegimeViolation
// when the admissibility check fails, NotContractive when the measured
// ||G_{-1}|| is >= 1 or residuals stop decreasing for 5 consecutive steps.
// The seed feeds the norm estimator's start vector.
SolveReport solve_born(const LSOperator& op, const Field& inc, double tol = 1e-8,
                       int maxit = 200, std::uint64_t seed = 7);

// Restarted GMRES on (I - G_M) u = inc. Throws MaxIterationsExceeded.
SolveReport solve_krylov(const LSOperator& op, const Field& inc, double tol = 1e-8,
                         int maxit = 300, int restart = 60);

// Quasi-uniform unit directions (Fibonacci sphere); n = 6 is not special here,
// use exterior_points for axis sets.
std::vector<Vec3> fibonacci_directions(int n);

}  // namespace mvie
