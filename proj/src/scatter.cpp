#include "mvie/scatter.hpp"

#include <chrono>
#include <cmath>

#include "mvie/rng.hpp"

namespace mvie {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Field random_field(Eigen::Index cols, std::uint64_t seed) {
  GaussianRng rng(seed);
  Field f(6, cols);
  for (Eigen::Index v = 0; v < cols; ++v)
    for (int c = 0; c < 6; ++c) f(c, v) = rng.cnormal();
  return f;
}

double fnorm(const Field& f) { return f.norm(); }

// Tail geometric mean of residual ratios; the empirical contraction rate.
double tail_ratio(const std::vector<double>& hist) {
  if (hist.size() < 2) return 0.0;
  const std::size_t span = std::min<std::size_t>(5, hist.size() - 1);
  const double head = hist[hist.size() - 1 - span];
  const double tail = hist.back();
  if (head <= 0.0 || tail <= 0.0) return 0.0;
  return std::pow(tail / head, 1.0 / static_cast<double>(span));
}

}  // namespace

LSOperator make_ls_operator(const VoxelDomain& domain,
                            std::shared_ptr<const KernelTable> table,
                            const MediumSpec& medium, double series_tol, double cpw) {
  LSOperator op;
  op.medium = medium;
  op.domain = &domain;
  op.table = std::move(table);
  op.M = assemble_M(medium);
  op.J = series_cutoff(medium, series_tol);
  op.M_J = assemble_M_truncated(medium, op.J);
  op.series_tol = series_tol;
  op.cpw = cpw;
  return op;
}

Field apply_G_minus1(const LSOperator& op, const Field& f) {
  const Field jf = contrast_diag(op.medium) * f;
  return op.medium.omega * dyadic_green_apply(*op.table, op.medium, *op.domain, jf);
}

Field apply_G_j(const LSOperator& op, int j, const Field& f) {
  const CMat6 T = assemble_T(op.medium);
  const CMat6 CpT = assemble_C(op.medium) + T;
  CMat6 coeff = CpT * ratio_diag(op.medium);
  for (int i = 0; i < j; ++i) coeff = T * coeff;
  const Field jf = coeff * f;
  return op.medium.omega * dyadic_green_apply(*op.table, op.medium, *op.domain, jf);
}

Field apply_LS(const LSOperator& op, const Field& f) {
  const Field jf = op.M_J * f;
  return f - op.medium.omega * dyadic_green_apply(*op.table, op.medium, *op.domain, jf);
}

Field apply_LS_per_term(const LSOperator& op, const Field& f) {
  Field out = f - apply_G_minus1(op, f);
  for (int j = 0; j <= op.J; ++j) out -= apply_G_j(op, j, f);
  return out;
}

Field apply_LS_adjoint(const LSOperator& op, const Field& f) {
  const Field gadj = dyadic_green_apply_adjoint(*op.table, op.medium, *op.domain, f);
  return f - op.medium.omega * (op.M_J.adjoint() * gadj);
}

double operator_norm_estimate(const std::function<Field(const Field&)>& apply,
                              const std::function<Field(const Field&)>& apply_adjoint,
                              Eigen::Index cols, int iters, std::uint64_t seed) {
  Field v = random_field(cols, seed);
  v /= fnorm(v);
  double s = 0.0;
  for (int i = 0; i < iters; ++i) {
    const Field w = apply_adjoint(apply(v));
    s = fnorm(w);
    if (s == 0.0) return 0.0;
    v = w / s;
  }
  return std::sqrt(s);
}

SolveReport solve_born(const LSOperator& op, const Field& inc, double tol, int maxit,
                       std::uint64_t seed) {
  const auto t0 = Clock::now();
  SolveReport rep;
  rep.method = "born";
  // Measured contraction is checked before the analytic regime bounds: a
  // demonstrably non-contractive operator is the sharper diagnosis (large
  // contrasts fail both).
  rep.norm_G_minus1 = operator_norm_estimate(
      [&](const Field& f) { return apply_G_minus1(op, f); },
      [&](const Field& f) {
        const Field g = dyadic_green_apply_adjoint(*op.table, op.medium, *op.domain, f);
        return Field(op.medium.omega * (contrast_diag(op.medium).adjoint() * g));
      },
      op.domain->size(), 20, seed);
  if (rep.norm_G_minus1 >= 1.0)
    throw NotContractive("measured ||G_-1|| = " + std::to_string(rep.norm_G_minus1));

  const RegimeReport regime = check_regime(op.medium, op.cpw);
  if (!regime.pass()) throw RegimeViolation("admissibility inequalities fail");

  const double ninc = fnorm(inc);
  if (ninc == 0.0) {
    rep.u = inc;
    rep.converged = true;
    rep.wall_seconds = seconds_since(t0);
    return rep;
  }

  Field u = inc;
  int stalled = 0;
  for (int it = 0; it < maxit; ++it) {
    const Field jf = op.M_J * u;
    Field un = inc + op.medium.omega *
                         dyadic_green_apply(*op.table, op.medium, *op.domain, jf);
    const double r = fnorm(un - u) / ninc;
    if (!rep.residuals.empty() && r >= rep.residuals.back()) {
      if (++stalled >= 5) throw NotContractive("residuals non-decreasing for 5 steps");
    } else {
      stalled = 0;
    }
    rep.residuals.push_back(r);
    u.swap(un);
    rep.iterations = it + 1;
    if (r < tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged) throw MaxIterationsExceeded("fixed-point iteration hit maxit");
  rep.u = std::move(u);
  rep.rho = tail_ratio(rep.residuals);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

SolveReport solve_krylov(const LSOperator& op, const Field& inc, double tol, int maxit,
                         int restart) {
  const auto t0 = Clock::now();
  SolveReport rep;
  rep.method = "krylov";

  const Eigen::Index n = inc.size();
  const Eigen::Map<const CVecX> b(inc.data(), n);
  const double nb = b.norm();
  if (nb == 0.0) {
    rep.u = Field::Zero(6, inc.cols());
    rep.converged = true;
    rep.wall_seconds = seconds_since(t0);
    return rep;
  }

  const auto applyA = [&](const CVecX& v) {
    const Eigen::Map<const Field> vf(v.data(), 6, inc.cols());
    Field out = apply_LS(op, vf);
    return CVecX(Eigen::Map<const CVecX>(out.data(), n));
  };

  CVecX x = CVecX::Zero(n);
  int total_it = 0;
  while (total_it < maxit && !rep.converged) {
    CVecX r = b - applyA(x);
    const double beta = r.norm();
    if (beta / nb < tol) {
      rep.converged = true;
      break;
    }
    std::vector<CVecX> V;
    V.reserve(static_cast<std::size_t>(restart) + 1);
    V.push_back(r / beta);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(restart + 1, restart);
    CVecX g = CVecX::Zero(restart + 1);
    g[0] = beta;
    std::vector<double> cs(restart);
    std::vector<Cplx> sn(restart);

    int j = 0;
    for (; j < restart && total_it < maxit; ++j, ++total_it) {
      CVecX w = applyA(V[static_cast<std::size_t>(j)]);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V[static_cast<std::size_t>(i)].dot(w);  // conjugating inner product
        w -= H(i, j) * V[static_cast<std::size_t>(i)];
      }
      H(j + 1, j) = w.norm();
      if (std::abs(H(j + 1, j)) > 0.0) V.push_back(w / H(j + 1, j).real());

      for (int i = 0; i < j; ++i) {
        const Cplx tmp = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -std::conj(sn[i]) * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = tmp;
      }
      const Cplx a = H(j, j), bb = H(j + 1, j);
      const double t = std::sqrt(std::norm(a) + std::norm(bb));
      if (t == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else if (std::abs(a) == 0.0) {
        cs[j] = 0.0;
        sn[j] = 1.0;
      } else {
        cs[j] = std::abs(a) / t;
        sn[j] = (a / std::abs(a)) * std::conj(bb) / t;
      }
      H(j, j) = cs[j] * a + sn[j] * bb;
      H(j + 1, j) = 0.0;
      g[j + 1] = -std::conj(sn[j]) * g[j];
      g[j] = cs[j] * g[j];

      const double res = std::abs(g[j + 1]) / nb;
      rep.residuals.push_back(res);
      if (res < tol) {
        ++j;
        ++total_it;
        rep.converged = true;
        break;
      }
    }
    if (j > 0) {
      const CVecX y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
      for (int i = 0; i < j; ++i) x += y[i] * V[static_cast<std::size_t>(i)];
    }
  }
  rep.iterations = total_it;
  if (!rep.converged)
    throw MaxIterationsExceeded("GMRES hit the iteration limit at relative residual " +
                                std::to_string(rep.residuals.empty() ? 1.0
                                                                     : rep.residuals.back()));
  rep.u = Eigen::Map<const Field>(x.data(), 6, inc.cols());
  rep.rho = tail_ratio(rep.residuals);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

std::vector<Vec3> fibonacci_directions(int n) {
  std::vector<Vec3> dirs;
  dirs.reserve(static_cast<std::size_t>(n));
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return dirs;
}

}  // namespace mvie
