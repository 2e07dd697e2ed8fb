#include "oracles.hpp"

#include <cmath>
#include <vector>

namespace mvie::oracles {

Eigen::MatrixXcd dense_dyadic_matrix(const MediumSpec& m, const VoxelDomain& dom) {
  const Eigen::Index n = dom.size();
  Eigen::MatrixXcd G(6 * n, 6 * n);
  const CMat6 self = dyadic_green_self(m, dom.h);
  for (Eigen::Index u = 0; u < n; ++u) {
    const Vec3 xu = dom.center(u);
    for (Eigen::Index v = 0; v < n; ++v) {
      G.block<6, 6>(6 * u, 6 * v) =
          (u == v) ? self : dyadic_green_column(m, Vec3(xu - dom.center(v)));
    }
  }
  return G;
}

Field dense_dyadic_apply(const MediumSpec& m, const VoxelDomain& dom, const Field& f) {
  const Eigen::Index n = dom.size();
  const double h3 = dom.h * dom.h * dom.h;
  Eigen::VectorXcd g(6 * n);
  for (Eigen::Index v = 0; v < n; ++v) g.segment<6>(6 * v) = dom.chi[v] * h3 * f.col(v);
  const Eigen::VectorXcd out = dense_dyadic_matrix(m, dom) * g;
  Field result(6, n);
  for (Eigen::Index u = 0; u < n; ++u) result.col(u) = out.segment<6>(6 * u);
  return result;
}

CVecX dense_newtonian_apply(double k0, const VoxelDomain& dom, const CVecX& f) {
  const Eigen::Index n = dom.size();
  const double h3 = dom.h * dom.h * dom.h;
  const Cplx self = self_term(k0, dom.h);
  CVecX out = CVecX::Zero(n);
  for (Eigen::Index u = 0; u < n; ++u) {
    const Vec3 xu = dom.center(u);
    Cplx acc = self * dom.chi[u] * f[u];
    for (Eigen::Index v = 0; v < n; ++v) {
      if (v == u || dom.chi[v] == 0.0) continue;
      acc += phi_k(k0, Vec3(xu - dom.center(v))) * dom.chi[v] * h3 * f[v];
    }
    out[u] = acc;
  }
  return out;
}

namespace {

// Nodes and weights on [-1, 1] by Newton iteration on the Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

}  // namespace

Cplx self_term_quadrature(double k0, double h) {
  // Integral of the scalar kernel over the equivalent ball reduces to
  // -int_0^a r exp(i k0 r) dr after the angular factor cancels 1/(4 pi r).
  const double a = h * std::cbrt(3.0 / (4.0 * kPi));
  std::vector<double> x, w;
  gauss_legendre(64, x, w);
  Cplx acc = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double r = 0.5 * a * (x[i] + 1.0);
    acc += w[i] * r * std::exp(kI * (k0 * r));
  }
  return -0.5 * a * acc;
}

}  // namespace mvie::oracles
