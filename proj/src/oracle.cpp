#include "mvie/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "mvie/greens.hpp"

namespace mvie {

std::vector<double> spherical_bessel_j(int nmax, double x) {
  if (x <= 0.0) throw SingularPoint("spherical Bessel argument must be positive");
  const int start = nmax + std::max(15, static_cast<int>(x) + 15);
  std::vector<double> j(static_cast<std::size_t>(nmax) + 1);
  double jp1 = 0.0, jn = 1e-30;
  for (int n = start; n > 0; --n) {
    const double jm1 = (2.0 * n + 1.0) / x * jn - jp1;
    jp1 = jn;
    jn = jm1;
    if (n - 1 <= nmax) j[static_cast<std::size_t>(n - 1)] = jn;
    if (std::abs(jn) > 1e250) {  // rescale to dodge overflow on long tails
      jn *= 1e-250;
      jp1 *= 1e-250;
      for (auto& v : j) v *= 1e-250;
    }
  }
  // normalize by whichever low order sits farther from a zero of j
  const double j0c = std::sin(x) / x;
  const double j1c = std::sin(x) / (x * x) - std::cos(x) / x;
  const double scale = (std::abs(j0c) >= std::abs(j1c) || nmax < 1)
                           ? j0c / j[0]
                           : j1c / j[1];
  for (auto& v : j) v *= scale;
  return j;
}

std::vector<double> spherical_bessel_y(int nmax, double x) {
  if (x <= 0.0) throw SingularPoint("spherical Bessel argument must be positive");
  std::vector<double> y(static_cast<std::size_t>(nmax) + 1);
  y[0] = -std::cos(x) / x;
  if (nmax >= 1) y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int n = 1; n < nmax; ++n)
    y[static_cast<std::size_t>(n) + 1] =
        (2.0 * n + 1.0) / x * y[static_cast<std::size_t>(n)] -
        y[static_cast<std::size_t>(n) - 1];
  return y;
}

namespace {

// Riccati function psi_n = x f_n(x) and derivative psi'_n = psi_{n-1} - n/x psi_n.
struct Riccati {
  std::vector<Cplx> val, der;
};

Riccati riccati_from(const std::vector<double>& re, const std::vector<double>* im,
                     double x, Cplx d0) {
  const std::size_t n = re.size();
  Riccati r;
  r.val.resize(n);
  r.der.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    r.val[i] = x * Cplx(re[i], im ? (*im)[i] : 0.0);
  r.der[0] = d0;
  for (std::size_t i = 1; i < n; ++i)
    r.der[i] = r.val[i - 1] - static_cast<double>(i) / x * r.val[i];
  return r;
}

}  // namespace

MieSolution mie_coefficients(double radius, const MediumSpec& m) {
  if (radius <= 0.0) throw DegenerateShape("sphere radius must be positive");
  if (m.V.norm() != 0.0) throw Error("Mie oracle requires a medium at rest");

  MieSolution sol;
  sol.radius = radius;
  sol.k0 = m.k0();
  sol.k = m.k();
  const double eps_r = m.eps / m.eps0, mu_r = m.mu / m.mu0;
  sol.impedance_ratio = std::sqrt(mu_r / eps_r);
  const double x = sol.k0 * radius;
  const double mrel = std::sqrt(eps_r * mu_r);
  const double mx = mrel * x;
  const int nmax =
      std::max(3, static_cast<int>(std::ceil(x + 4.0 * std::cbrt(x) + 2.0)) + 3);
  sol.n_max = nmax;

  const auto jx = spherical_bessel_j(nmax, x);
  const auto yx = spherical_bessel_y(nmax, x);
  const auto jmx = spherical_bessel_j(nmax, mx);
  const Riccati psi_x = riccati_from(jx, nullptr, x, std::cos(x));
  const Riccati psi_mx = riccati_from(jmx, nullptr, mx, std::cos(mx));
  const Riccati xi_x = riccati_from(jx, &yx, x, Cplx(std::cos(x), std::sin(x)));

  const double mu_b = m.mu0, mu_p = m.mu;
  sol.an.resize(static_cast<std::size_t>(nmax));
  sol.bn.resize(static_cast<std::size_t>(nmax));
  for (int n = 1; n <= nmax; ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    const Cplx pmx = psi_mx.val[i], dpmx = psi_mx.der[i];
    const Cplx px = psi_x.val[i], dpx = psi_x.der[i];
    const Cplx xx = xi_x.val[i], dxx = xi_x.der[i];
    sol.an[i - 1] = (mu_b * mrel * pmx * dpx - mu_p * px * dpmx) /
                    (mu_b * mrel * pmx * dxx - mu_p * xx * dpmx);
    sol.bn[i - 1] = ((mu_p / mrel) * pmx * dpx - mu_b * px * dpmx) /
                    ((mu_p / mrel) * pmx * dxx - mu_b * xx * dpmx);
  }
  sol.converged = std::abs(sol.an.back()) < 1e-12 && std::abs(sol.bn.back()) < 1e-12;
  return sol;
}

FarField mie_far_field(double radius, const MediumSpec& m, const Vec3& d,
                       const Vec3& pol, const std::vector<Vec3>& dirs) {
  if (std::abs(d.norm() - 1.0) > 1e-12)
    throw BadDirection("propagation direction must be unit length");
  const MieSolution sol = mie_coefficients(radius, m);
  if (!sol.converged) throw NotConverged("Mie multipole tail above 1e-12");

  const Vec3 pp = d.cross(pol).cross(d);
  const double E0 = pp.norm();
  if (E0 == 0.0) throw BadDirection("polarization parallel to propagation");
  const Vec3 ex = pp / E0, ez = d, ey = ez.cross(ex);
  const Cplx amp = kI * sol.k0;  // matches the incident_plane amplitude i*k0
  const int nmax = sol.n_max;

  FarField ff;
  ff.k0 = sol.k0;
  ff.omega = m.omega;
  ff.admittance = std::sqrt(m.eps0 / m.mu0);
  ff.directions = dirs;
  ff.values.resize(6, static_cast<Eigen::Index>(dirs.size()));

  std::vector<double> pi_n(static_cast<std::size_t>(nmax) + 1);
  for (std::size_t idx = 0; idx < dirs.size(); ++idx) {
    const Vec3& th = dirs[idx];
    const double ct = std::clamp(th.dot(ez), -1.0, 1.0);
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const double cp = st < 1e-12 ? 1.0 : th.dot(ex) / st;
    const double sp = st < 1e-12 ? 0.0 : th.dot(ey) / st;

    pi_n[0] = 0.0;
    pi_n[1] = 1.0;
    for (int n = 2; n <= nmax; ++n)
      pi_n[static_cast<std::size_t>(n)] =
          ((2.0 * n - 1.0) * ct * pi_n[static_cast<std::size_t>(n) - 1] -
           n * pi_n[static_cast<std::size_t>(n) - 2]) /
          (n - 1.0);
    Cplx S1 = 0.0, S2 = 0.0;
    for (int n = 1; n <= nmax; ++n) {
      const std::size_t i = static_cast<std::size_t>(n);
      const double tau = n * ct * pi_n[i] - (n + 1.0) * pi_n[i - 1];
      const double f = (2.0 * n + 1.0) / (n * (n + 1.0));
      S1 += f * (sol.an[i - 1] * pi_n[i] + sol.bn[i - 1] * tau);
      S2 += f * (sol.an[i - 1] * tau + sol.bn[i - 1] * pi_n[i]);
    }
    const Vec3 that_lab = ct * cp * ex + ct * sp * ey - st * ez;
    const Vec3 phat_lab = -sp * ex + cp * ey;
    const CVec3 Evec =
        (kI / sol.k0) * (S2 * cp * that_lab.cast<Cplx>() - S1 * sp * phat_lab.cast<Cplx>());
    const CVec3 E = amp * E0 * Evec;
    ff.values.block<3, 1>(0, static_cast<Eigen::Index>(idx)) = E;
    ff.values.block<3, 1>(3, static_cast<Eigen::Index>(idx)) =
        ff.admittance * th.cast<Cplx>().cross(E);
  }
  validate_far_field(ff);
  return ff;
}

CVec6 image_green(const MediumSpec& m, const Vec3& x, const Vec3& z, const Vec3& p) {
  if (x.z() <= 0.0 || z.z() <= 0.0)
    throw Error("image tensor needs both points in the upper half-space");
  if ((x - z).norm() == 0.0) throw SingularPoint("source and evaluation coincide");
  const Vec3 zs(z.x(), z.y(), -z.z());
  CVec6 q = CVec6::Zero();
  q.head<3>() = p.cast<Cplx>();
  return (dyadic_green_column(m, x - z) - dyadic_green_column(m, x - zs)) * q;
}

}  // namespace mvie
