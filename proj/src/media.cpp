#include "mvie/media.hpp"

#include <algorithm>
#include <cmath>

namespace mvie {

Mat3 cross_matrix(const Vec3& v) {
  Mat3 W;
  W << 0, -v.z(), v.y(),
       v.z(), 0, -v.x(),
       -v.y(), v.x(), 0;
  return W;
}

CMat6 assemble_T(const MediumSpec& m) {
  const Mat3 W = cross_matrix(m.V);
  CMat6 T = CMat6::Zero();
  T.block<3, 3>(0, 3) = (m.mu0 * (m.eps / m.eps0)) * W.cast<Cplx>();
  T.block<3, 3>(3, 0) = (-m.eps0 * (m.mu / m.mu0)) * W.cast<Cplx>();
  return T;
}

CMat6 assemble_C(const MediumSpec& m) {
  const Mat3 W = cross_matrix(m.V);
  const double inv_c2 = m.eps0 * m.mu0;
  CMat6 C = CMat6::Zero();
  C.block<3, 3>(0, 3) = (-inv_c2 / m.eps0 * (m.mu0 / m.mu)) * W.cast<Cplx>();
  C.block<3, 3>(3, 0) = (inv_c2 / m.mu0 * (m.eps0 / m.eps)) * W.cast<Cplx>();
  return C;
}

double norm_T(const MediumSpec& m) {
  return std::max(m.mu0 * (m.eps / m.eps0), m.eps0 * (m.mu / m.mu0)) * m.V.norm();
}

double norm_CplusT(const MediumSpec& m) {
  const double gap = 1.0 / (m.c_Omega() * m.c_Omega()) - 1.0 / (m.c() * m.c());
  return std::max(m.mu0 / (m.mu * m.eps0), m.eps0 / (m.mu0 * m.eps)) * gap * m.V.norm();
}

CMat6 assemble_B(const MediumSpec& m) {
  if (norm_T(m) >= 1.0) throw RegimeViolation("||T|| >= 1: geometric series diverges");
  const CMat6 T = assemble_T(m);
  const CMat6 ImT = CMat6::Identity() - T;
  return ImT.inverse() - CMat6::Identity();
}

CMat6 assemble_B_series(const MediumSpec& m, double tol) {
  const double nT = norm_T(m);
  if (nT >= 1.0) throw RegimeViolation("||T|| >= 1: geometric series diverges");
  const CMat6 T = assemble_T(m);
  CMat6 B = CMat6::Zero();
  CMat6 power = T;
  double tail = nT / (1.0 - nT);
  int n = 1;
  while (tail >= tol && n <= 2048) {
    B += power;
    power = power * T;
    tail *= nT;
    ++n;
  }
  if (tail >= tol) throw NotConverged("series tail bound not reached");
  return B;
}

CMat6 contrast_diag(const MediumSpec& m) {
  CMat6 D = CMat6::Zero();
  D.block<3, 3>(0, 0) = (m.eps / m.eps0 - 1.0) * CMat3::Identity();
  D.block<3, 3>(3, 3) = (m.mu / m.mu0 - 1.0) * CMat3::Identity();
  return D;
}

CMat6 ratio_diag(const MediumSpec& m) {
  CMat6 D = CMat6::Zero();
  D.block<3, 3>(0, 0) = (m.eps / m.eps0) * CMat3::Identity();
  D.block<3, 3>(3, 3) = (m.mu / m.mu0) * CMat3::Identity();
  return D;
}

CMat6 assemble_M(const MediumSpec& m) {
  if (norm_T(m) >= 1.0) throw RegimeViolation("||T|| >= 1: coupling matrix undefined");
  const CMat6 T = assemble_T(m);
  const CMat6 C = assemble_C(m);
  const CMat6 ImT = CMat6::Identity() - T;
  return contrast_diag(m) + ImT.inverse() * (C + T) * ratio_diag(m);
}

CMat6 assemble_M_truncated(const MediumSpec& m, int J) {
  const CMat6 T = assemble_T(m);
  const CMat6 CpT = assemble_C(m) + T;
  CMat6 geom = CMat6::Identity();
  CMat6 power = CMat6::Identity();
  for (int j = 1; j <= J; ++j) {
    power = power * T;
    geom += power;
  }
  return contrast_diag(m) + geom * CpT * ratio_diag(m);
}

int series_cutoff(const MediumSpec& m, double tol) {
  const double nT = norm_T(m);
  if (nT == 0.0) return 0;
  if (nT >= 1.0) throw RegimeViolation("||T|| >= 1: no finite series cutoff");
  int J = 0;
  double tail = nT / (1.0 - nT);
  while (tail >= tol && J < 2048) {
    tail *= nT;
    ++J;
  }
  return J;
}

RegimeReport check_regime(const MediumSpec& m, double cpw) {
  RegimeReport r;
  r.c = m.c();
  r.c_Omega = m.c_Omega();
  r.normT = norm_T(m);
  r.normCplusT = norm_CplusT(m);

  r.lhs1 = r.normT;
  r.pass1 = r.lhs1 < 1.0;

  const double w = m.omega;
  const double ratio = std::max(m.eps / m.eps0, m.mu / m.mu0);
  const double inner = std::max({1.0, w * m.eps0, w * m.mu0, w * (m.eps - m.eps0),
                                 w * (m.mu - m.mu0),
                                 w * w * m.eps0 * m.mu0 *
                                     std::max(m.eps / m.eps0 - 1.0, m.mu / m.mu0 - 1.0)});
  r.lhs2 = cpw * (1.0 - r.c_Omega / r.c) * ratio * inner;
  r.pass2 = r.lhs2 < 0.5;
  return r;
}

}  // namespace mvie
