#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <tuple>
#include <vector>

#include "mvie/farfield.hpp"
#include "mvie/fields.hpp"
#include "mvie/oracle.hpp"
#include "mvie/scatter.hpp"

using namespace mvie;

namespace {

MediumSpec rest_medium(double eps_r, double mu_r, double omega = 1.0) {
  MediumSpec m;
  m.eps = eps_r;
  m.mu = mu_r;
  m.omega = omega;
  return m;
}

CVec6 dipole_column(const MediumSpec& m, const Vec3& z, const Vec3& p, const Vec3& x) {
  const auto [E, H] = incident_point_dipole(m, z, p, x);
  CVec6 out;
  out.head<3>() = E;
  out.tail<3>() = H;
  return out;
}

}  // namespace

TEST_CASE("spherical Bessel recurrences match closed forms") {
  const double x = 2.7;
  const auto j = spherical_bessel_j(2, x);
  const auto y = spherical_bessel_y(2, x);
  CHECK(j[0] == doctest::Approx(std::sin(x) / x).epsilon(1e-14));
  CHECK(j[1] == doctest::Approx(std::sin(x) / (x * x) - std::cos(x) / x).epsilon(1e-14));
  CHECK(y[0] == doctest::Approx(-std::cos(x) / x).epsilon(1e-14));

  // cross-Wronskian j_n y_{n-1} - j_{n-1} y_n = 1/x^2 ties both recurrences together
  const double xw = 7.3;
  const int nmax = 20;
  const auto jw = spherical_bessel_j(nmax, xw);
  const auto yw = spherical_bessel_y(nmax, xw);
  for (int n = 1; n <= nmax; ++n) {
    const double w = jw[n] * yw[n - 1] - jw[n - 1] * yw[n];
    CHECK(std::abs(xw * xw * w - 1.0) <= 1e-10);
  }

  CHECK_THROWS_AS(spherical_bessel_j(3, 0.0), SingularPoint);
  CHECK_THROWS_AS(spherical_bessel_y(3, -1.0), SingularPoint);
}

TEST_CASE("mie coefficients vanish without contrast") {
  const MediumSpec m = rest_medium(1.0, 1.0);
  const MieSolution sol = mie_coefficients(0.7, m);
  for (const Cplx& a : sol.an) CHECK(std::abs(a) <= 1e-15);
  for (const Cplx& b : sol.bn) CHECK(std::abs(b) <= 1e-15);

  const FarField ff = mie_far_field(0.7, m, Vec3(0, 0, 1), Vec3(1, 0, 0),
                                    {Vec3(0, 1, 0), Vec3(0, 0, -1)});
  CHECK(ff.values.cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("small sphere amplitude follows the static polarizability") {
  const double eps_r = 1.1, a = 0.1;
  const MediumSpec m = rest_medium(eps_r, 1.0);
  const double k0 = m.k0();
  const double rayleigh = k0 * k0 * k0 * a * a * a * (eps_r - 1.0) / (eps_r + 2.0);
  CHECK(rayleigh == doctest::Approx(3.2258e-5).epsilon(1e-4));

  const FarField ff = mie_far_field(a, m, Vec3(0, 0, 1), Vec3(1, 0, 0),
                                    {Vec3(0, 1, 0), Vec3(0, 0, -1)});
  for (Eigen::Index c = 0; c < 2; ++c) {
    const double amp = ff.values.block<3, 1>(0, c).norm();
    CHECK(amp == doctest::Approx(rayleigh).epsilon(0.02));
  }
}

TEST_CASE("multipole cutoff covers the tail") {
  const std::vector<std::tuple<double, double, double, double>> cases = {
      {1.2, 1.0, 1.0, 1.0}, {2.0, 1.5, 1.3, 1.0}, {2.0, 1.3, 2.0, 3.0}};
  for (const auto& [eps_r, mu_r, a, omega] : cases) {
    const MediumSpec m = rest_medium(eps_r, mu_r, omega);
    const MieSolution sol = mie_coefficients(a, m);
    const double x = m.k0() * a;
    CHECK(sol.n_max >= x + 4.0 * std::cbrt(x) + 2.0);
    CHECK(std::abs(sol.an.back()) < 1e-12);
    CHECK(std::abs(sol.bn.back()) < 1e-12);
    CHECK(sol.converged);
    for (const Cplx& v : sol.an) CHECK(std::abs(v) <= 1.0 + 1e-12);
    for (const Cplx& v : sol.bn) CHECK(std::abs(v) <= 1.0 + 1e-12);
    CHECK(sol.impedance_ratio == doctest::Approx(std::sqrt(mu_r / eps_r)).epsilon(1e-14));
  }
}

TEST_CASE("mie coefficients match frozen references") {
  // Reference values computed with an independent library-Bessel implementation
  // of the same recurrences, frozen at full double precision.
  struct Ref {
    double eps_r, mu_r, a;
    Cplx a1, b1, a2, b2;
  };
  const std::vector<Ref> refs = {
      {1.2, 1.0, 1.0,
       {1.2416026422921308e-3, -3.521450077980353e-2},
       {1.5557338677732316e-5, -3.9442485528862889e-3},
       {4.703521929924795e-6, -2.1687553589112463e-3},
       {1.3161709981432895e-8, -1.1472449524056441e-4}},
      {2.0, 1.5, 1.3,
       {1.740377453024789e-1, -3.7914193715877481e-1},
       {1.1820064291494259e-1, -3.2284555274842619e-1},
       {1.2538822452420866e-3, -3.5387992660747984e-2},
       {5.7371444889638221e-4, -2.3945465137004743e-2}}};
  for (const Ref& r : refs) {
    const MieSolution sol = mie_coefficients(r.a, rest_medium(r.eps_r, r.mu_r));
    REQUIRE(sol.an.size() >= 2);
    CHECK(std::abs(sol.an[0] - r.a1) <= 1e-10 * std::abs(r.a1));
    CHECK(std::abs(sol.bn[0] - r.b1) <= 1e-10 * std::abs(r.b1));
    CHECK(std::abs(sol.an[1] - r.a2) <= 1e-10 * std::abs(r.a2));
    CHECK(std::abs(sol.bn[1] - r.b2) <= 1e-10 * std::abs(r.b2));
  }
}

TEST_CASE("forward amplitude balances integrated scattered power") {
  // Lossless media: extinction computed from the forward amplitude equals the
  // solid-angle integral of |E_inf|^2 (equal-weight quadrature on 2000 dirs).
  const std::vector<std::tuple<double, double, double>> cases = {{1.5, 1.0, 1.0},
                                                                 {2.0, 1.5, 1.3}};
  for (const auto& [eps_r, mu_r, a] : cases) {
    const MediumSpec m = rest_medium(eps_r, mu_r);
    const double k0 = m.k0();
    const Vec3 d(0, 0, 1), p(1, 0, 0);
    const CVec3 E0 = (kI * k0) * d.cross(p).cross(d).cast<Cplx>();
    const double denom = E0.squaredNorm();

    const std::vector<Vec3> dirs = fibonacci_directions(2000);
    const FarField ff = mie_far_field(a, m, d, p, dirs);
    double sum = 0.0;
    for (Eigen::Index c = 0; c < ff.values.cols(); ++c)
      sum += ff.values.block<3, 1>(0, c).squaredNorm();
    const double sigma_sca = 4.0 * kPi / static_cast<double>(dirs.size()) * sum / denom;

    const FarField fwd = mie_far_field(a, m, d, p, {d});
    const CVec3 Efwd = fwd.values.block<3, 1>(0, 0);
    const double sigma_ext = 4.0 * kPi / k0 * std::imag(E0.dot(Efwd)) / denom;

    CHECK(sigma_sca > 0.0);
    CHECK(std::abs(sigma_ext - sigma_sca) <= 1e-3 * sigma_sca);
  }
}

TEST_CASE("mie oracle rejects bad inputs") {
  CHECK_THROWS_AS(mie_coefficients(0.0, rest_medium(1.2, 1.0)), DegenerateShape);
  CHECK_THROWS_AS(mie_coefficients(-1.0, rest_medium(1.2, 1.0)), DegenerateShape);

  MediumSpec moving = rest_medium(1.2, 1.0);
  moving.V = Vec3(0.01, 0.0, 0.0);
  CHECK_THROWS_AS(mie_coefficients(1.0, moving), Error);

  const MediumSpec m = rest_medium(1.2, 1.0);
  CHECK_THROWS_AS(mie_far_field(1.0, m, Vec3(0, 0, 2), Vec3(1, 0, 0), {Vec3(0, 1, 0)}),
                  BadDirection);
  CHECK_THROWS_AS(mie_far_field(1.0, m, Vec3(0, 0, 1), Vec3(0, 0, 2), {Vec3(0, 1, 0)}),
                  BadDirection);
}

TEST_CASE("image column is the direct column minus the mirrored source") {
  const MediumSpec m = rest_medium(1.0, 1.0, 1.3);
  const Vec3 x(0.3, -0.2, 0.9), z(0.1, 0.4, 0.6), p(0.2, -1.0, 0.5);
  const Vec3 zs(z.x(), z.y(), -z.z());
  const CVec6 got = image_green(m, x, z, p);
  const CVec6 want = dipole_column(m, z, p, x) - dipole_column(m, zs, p, x);
  CHECK((got - want).norm() <= 1e-13 * want.norm());
  // matched media: the formula still subtracts a nonzero image term
  CHECK((got - dipole_column(m, z, p, x)).norm() > 1e-3);
}

TEST_CASE("image term fades as the source height grows") {
  const MediumSpec m = rest_medium(1.3, 1.0);
  const Vec3 p(0.3, 1.0, -0.4);
  std::vector<double> ratios;
  for (const double z3 : {1.0, 10.0, 100.0}) {
    const Vec3 z(0.0, 0.0, z3), x = z + Vec3(0.1, 0.0, 0.0);
    const CVec6 direct = dipole_column(m, z, p, x);
    const CVec6 img = image_green(m, x, z, p) - direct;
    ratios.push_back(img.norm() / direct.norm());
  }
  CHECK(ratios[1] < 0.3 * ratios[0]);
  CHECK(ratios[2] < 0.3 * ratios[1]);
}

TEST_CASE("image term blows up cubically toward the interface") {
  const MediumSpec m = rest_medium(1.3, 1.0);
  const Vec3 p(0.0, 1.0, 0.0);
  const std::vector<double> deltas = {0.05, 0.025, 0.0125};
  std::vector<double> mags;
  for (const double d : deltas) {
    const Vec3 z(0.0, 0.0, d), x = z + Vec3(1e-4, 0.0, 0.0);
    const CVec6 diff = image_green(m, x, z, p) - dipole_column(m, z, p, x);
    mags.push_back(diff.norm());
  }
  const double slope = loglog_slope(deltas, mags);
  CHECK(slope == doctest::Approx(-3.0).epsilon(0.1));
}

TEST_CASE("direct term keeps dyadic reciprocity under point swap") {
  const MediumSpec m = rest_medium(1.0, 1.0, 1.3);
  const Vec3 x(0.3, -0.2, 0.9), z(-0.1, 0.4, 0.6);
  const Vec3 xs(x.x(), x.y(), -x.z()), zs(z.x(), z.y(), -z.z());
  CMat3 EEf, HEf, EEr, HEr;
  for (int j = 0; j < 3; ++j) {
    const Vec3 ej = Vec3::Unit(j);
    // add the image column back: what is left is the direct free-space column
    const CVec6 fwd = image_green(m, x, z, ej) + dipole_column(m, zs, ej, x);
    const CVec6 rev = image_green(m, z, x, ej) + dipole_column(m, xs, ej, z);
    EEf.col(j) = fwd.head<3>();
    HEf.col(j) = fwd.tail<3>();
    EEr.col(j) = rev.head<3>();
    HEr.col(j) = rev.tail<3>();
  }
  CHECK((EEr - EEf.transpose()).cwiseAbs().maxCoeff() <=
        1e-10 * EEf.cwiseAbs().maxCoeff());
  CHECK((HEr - HEf.transpose()).cwiseAbs().maxCoeff() <=
        1e-10 * HEf.cwiseAbs().maxCoeff());
}

TEST_CASE("image tensor rejects lower half-space points") {
  const MediumSpec m = rest_medium(1.2, 1.0);
  const Vec3 p(1, 0, 0);
  CHECK_THROWS_AS(image_green(m, Vec3(0, 0, -0.5), Vec3(0, 0, 1), p), Error);
  CHECK_THROWS_AS(image_green(m, Vec3(0, 0, 0.5), Vec3(0, 0, -1), p), Error);
  CHECK_THROWS_AS(image_green(m, Vec3(0, 0, 0.0), Vec3(0, 0, 1), p), Error);
  CHECK_THROWS_AS(image_green(m, Vec3(0, 0, 0.7), Vec3(0, 0, 0.7), p), SingularPoint);
}
