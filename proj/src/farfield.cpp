#include "mvie/farfield.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mvie/greens.hpp"

namespace mvie {

namespace {

// Induced volume source of the solved state, q = (M_J u) chi h^3.
Field induced_source(const LSOperator& op, const Field& u) {
  const VoxelDomain& dom = *op.domain;
  const double h3 = dom.h * dom.h * dom.h;
  Field q = op.M_J * u;
  for (Eigen::Index v = 0; v < dom.size(); ++v) q.col(v) *= dom.chi[v] * h3;
  return q;
}

void require_converged(const SolveReport& state) {
  if (!state.converged) throw NotConverged("field state carries an unconverged flag");
}

}  // namespace

void validate_far_field(const FarField& ff, double tol) {
  for (std::size_t a = 0; a < ff.directions.size(); ++a) {
    const Vec3& th = ff.directions[a];
    const CVec3 E = ff.values.block<3, 1>(0, static_cast<Eigen::Index>(a));
    const CVec3 H = ff.values.block<3, 1>(3, static_cast<Eigen::Index>(a));
    if (std::abs(E.dot(th.cast<Cplx>())) > tol * E.norm())
      throw Error("far field is not transverse");
    if (std::abs(H.dot(th.cast<Cplx>())) > tol * H.norm())
      throw Error("far field is not transverse");
    const CVec3 want = ff.admittance * th.cast<Cplx>().cross(E);
    if ((H - want).norm() > tol * H.norm())
      throw Error("H_inf breaks the plane-wave relation to E_inf");
  }
}

CVec6 scattered_at(const LSOperator& op, const SolveReport& state, const Vec3& x) {
  require_converged(state);
  const VoxelDomain& dom = *op.domain;
  if (dom.shape.contains(x) || dom.support_distance(x) <= dom.h)
    throw TooCloseToSupport("evaluation point within one cell of the support");

  const Field q = induced_source(op, state.u);
  CVec6 acc = CVec6::Zero();
  for (Eigen::Index v = 0; v < dom.size(); ++v) {
    if (dom.chi[v] == 0.0) continue;
    acc += dyadic_green_column(op.medium, x - dom.center(v)) * q.col(v);
  }
  return op.medium.omega * acc;
}

FarField far_field(const LSOperator& op, const SolveReport& state,
                   const std::vector<Vec3>& dirs) {
  require_converged(state);
  const VoxelDomain& dom = *op.domain;
  const MediumSpec& m = op.medium;
  const double k0 = m.k0();
  const Field q = induced_source(op, state.u);

  FarField ff;
  ff.k0 = k0;
  ff.omega = m.omega;
  ff.admittance = std::sqrt(m.eps0 / m.mu0);
  ff.directions = dirs;
  ff.values.resize(6, static_cast<Eigen::Index>(dirs.size()));

  for (std::size_t a = 0; a < dirs.size(); ++a) {
    const Vec3& th = dirs[a];
    CVec3 qE = CVec3::Zero(), qH = CVec3::Zero();
    for (Eigen::Index v = 0; v < dom.size(); ++v) {
      if (dom.chi[v] == 0.0) continue;
      const Cplx ph = std::exp(-kI * k0 * th.dot(dom.center(v)));
      qE += ph * q.col(v).head<3>();
      qH += ph * q.col(v).tail<3>();
    }
    const CVec3 PqE = qE - th.cast<Cplx>() * th.cast<Cplx>().dot(qE);
    const CVec3 PqH = qH - th.cast<Cplx>() * th.cast<Cplx>().dot(qH);
    const CVec3 txqE = th.cast<Cplx>().cross(qE);
    const CVec3 txqH = th.cast<Cplx>().cross(qH);
    const double c = m.omega / (4.0 * kPi);
    ff.values.block<3, 1>(0, static_cast<Eigen::Index>(a)) =
        c * (m.omega * m.eps0 * m.mu0 * PqE - k0 * m.mu0 * txqH);
    ff.values.block<3, 1>(3, static_cast<Eigen::Index>(a)) =
        c * (k0 * m.eps0 * txqE + m.omega * m.eps0 * m.mu0 * PqH);
  }
  validate_far_field(ff);
  return ff;
}

double silver_muller_defect(const MediumSpec& m, const Vec3& theta, const CVec3& E,
                            const CVec3& H) {
  return (theta.cast<Cplx>().cross(H) + std::sqrt(m.eps0 / m.mu0) * E).norm();
}

SilverMullerReport silver_muller_residual(const LSOperator& op, const SolveReport& state,
                                          const std::vector<double>& radii, int ndirs) {
  SilverMullerReport rep;
  rep.radii = radii;
  const std::vector<Vec3> dirs = fibonacci_directions(ndirs);
  for (double R : radii) {
    double mx = 0.0;
    for (const Vec3& th : dirs) {
      const CVec6 uh = scattered_at(op, state, R * th);
      mx = std::max(mx, silver_muller_defect(op.medium, th, uh.head<3>(), uh.tail<3>()));
    }
    rep.residuals.push_back(mx);
  }
  rep.exponent = loglog_slope(rep.radii, rep.residuals);
  return rep;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw DimensionMismatch("slope fit needs matching lists of at least 2 points");
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void save_farfield_csv(const FarField& ff, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  char buf[64];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g%c", v, sep);
    out << buf;
  };
  out << "# mvie-farfield v1\n";
  std::snprintf(buf, sizeof buf, "%.17g", ff.k0);
  out << "# k0=" << buf;
  std::snprintf(buf, sizeof buf, "%.17g", ff.omega);
  out << " omega=" << buf;
  std::snprintf(buf, sizeof buf, "%.17g", ff.admittance);
  out << " admittance=" << buf << " n=" << ff.directions.size() << "\n";
  out << "tx,ty,tz,re_ex,im_ex,re_ey,im_ey,re_ez,im_ez,"
         "re_hx,im_hx,re_hy,im_hy,re_hz,im_hz\n";
  for (std::size_t a = 0; a < ff.directions.size(); ++a) {
    for (int c = 0; c < 3; ++c) put(ff.directions[a][c], ',');
    for (int c = 0; c < 6; ++c) {
      const Cplx v = ff.values(c, static_cast<Eigen::Index>(a));
      put(v.real(), ',');
      put(v.imag(), c == 5 ? '\n' : ',');
    }
  }
}

FarField load_farfield_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "# mvie-farfield v1")
    throw Error("unrecognized far-field file header in " + path);
  FarField ff;
  std::size_t n = 0;
  if (!std::getline(in, line) ||
      std::sscanf(line.c_str(), "# k0=%lg omega=%lg admittance=%lg n=%zu", &ff.k0,
                  &ff.omega, &ff.admittance, &n) != 4)
    throw Error("malformed far-field metadata in " + path);
  std::getline(in, line);  // column names
  ff.directions.reserve(n);
  ff.values.resize(6, static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    if (!std::getline(in, line)) throw Error("truncated far-field file " + path);
    double v[15];
    const char* s = line.c_str();
    char* end = nullptr;
    for (int c = 0; c < 15; ++c) {
      v[c] = std::strtod(s, &end);
      if (end == s) throw Error("malformed far-field row in " + path);
      s = (*end == ',') ? end + 1 : end;
    }
    ff.directions.emplace_back(v[0], v[1], v[2]);
    for (int c = 0; c < 6; ++c)
      ff.values(c, static_cast<Eigen::Index>(a)) = Cplx(v[3 + 2 * c], v[4 + 2 * c]);
  }
  return ff;
}

void save_farfield_json(const FarField& ff, const std::string& path) {
  nlohmann::json doc;
  doc["format"] = "mvie-farfield";
  doc["version"] = 1;
  doc["k0"] = ff.k0;
  doc["omega"] = ff.omega;
  doc["admittance"] = ff.admittance;
  doc["n"] = ff.directions.size();
  auto& rows = doc["patterns"];
  rows = nlohmann::json::array();
  for (std::size_t a = 0; a < ff.directions.size(); ++a) {
    nlohmann::json row;
    row["theta"] = {ff.directions[a].x(), ff.directions[a].y(), ff.directions[a].z()};
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int c = 0; c < 6; ++c) {
      const Cplx v = ff.values(c, static_cast<Eigen::Index>(a));
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    row["re"] = std::move(re);
    row["im"] = std::move(im);
    rows.push_back(std::move(row));
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << doc.dump(1) << "\n";
}

}  // namespace mvie
