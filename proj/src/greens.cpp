#include "mvie/greens.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace mvie {

namespace {

// Positive radiating kernel g = exp(ikr)/(4 pi r) and its radial derivatives.
struct RadialKernel {
  Cplx g, gp, gpp;
};

RadialKernel radial(double k, double r) {
  const Cplx g = std::exp(kI * (k * r)) / (4.0 * kPi * r);
  const Cplx d = kI * k - 1.0 / r;
  return {g, d * g, (d * d + 1.0 / (r * r)) * g};
}

// Integral of g over the ball of radius a; the k -> 0 limit is a^2/2. The
// closed form loses all digits to cancellation as ka -> 0, so small arguments
// take the power series of (exp(x)(1-x)-1)/x^2 instead.
Cplx ball_integral(double k, double a) {
  const Cplx x = kI * (k * a);
  if (std::abs(k * a) < 0.5) {
    Cplx term(-0.5, 0.0), sum = term;
    for (int m = 1; m < 32; ++m) {
      term *= x * ((m + 1.0) / (m * (m + 2.0)));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return -a * a * sum;
  }
  return (std::exp(x) * (1.0 - x) - 1.0) / (k * k);
}

double equivalent_radius(double h) { return h * std::cbrt(3.0 / (4.0 * kPi)); }

int wrap_offset(int i, int P) { return i < (P + 1) / 2 ? i : i - P; }

int sym_index(int a, int b) {
  if (a == b) return a;
  const int lo = std::min(a, b), hi = std::max(a, b);
  if (lo == 0) return hi == 1 ? 3 : 4;
  return 5;  // (1,2)
}

void check_field(const VoxelDomain& domain, const Field& f) {
  if (f.cols() != domain.size()) throw DimensionMismatch();
}

// Copies one component into the zero-initialized padded buffer.
void embed(const VoxelDomain& dom, const std::array<int, 3>& P, const Cplx* src,
           Cplx* dst) {
  std::fill_n(dst, static_cast<size_t>(P[0]) * P[1] * P[2], Cplx(0.0, 0.0));
  for (int i = 0; i < dom.dims[0]; ++i)
    for (int j = 0; j < dom.dims[1]; ++j) {
      const Cplx* s = src + (static_cast<Eigen::Index>(i) * dom.dims[1] + j) * dom.dims[2];
      Cplx* d = dst + (static_cast<Eigen::Index>(i) * P[1] + j) * P[2];
      std::memcpy(d, s, sizeof(Cplx) * dom.dims[2]);
    }
}

void restrict_scaled(const VoxelDomain& dom, const std::array<int, 3>& P, const Cplx* src,
                     Cplx* dst, double scale) {
  for (int i = 0; i < dom.dims[0]; ++i)
    for (int j = 0; j < dom.dims[1]; ++j) {
      const Cplx* s = src + (static_cast<Eigen::Index>(i) * P[1] + j) * P[2];
      Cplx* d = dst + (static_cast<Eigen::Index>(i) * dom.dims[1] + j) * dom.dims[2];
      for (int k = 0; k < dom.dims[2]; ++k) d[k] = scale * s[k];
    }
}

}  // namespace

Cplx phi_k(double k, const Vec3& x) {
  const double r = x.norm();
  if (r == 0.0) throw SingularPoint();
  return -std::exp(kI * (k * r)) / (4.0 * kPi * r);
}

Cplx self_term(double k0, double h) {
  return -ball_integral(k0, equivalent_radius(h));
}

KernelTable make_kernel_table(double k0, double h, const std::array<int, 3>& dims) {
  KernelTable t;
  t.k0 = k0;
  t.h = h;
  t.dims = dims;
  t.padded = {2 * dims[0], 2 * dims[1], 2 * dims[2]};
  t.self_cell = self_term(k0, h);
  t.fft = std::make_shared<Fft3>(t.padded);

  const Eigen::Index np = t.padded_size();
  t.scalar_hat.resize(np);
  for (auto& e : t.ee_hat) e.resize(np);
  for (auto& w : t.w_hat) w.resize(np);

  const double h3 = h * h * h;
  const Cplx ig = ball_integral(k0, equivalent_radius(h));
  // Voxel self-interaction of the tensor diagonal; curl entries vanish there.
  const Cplx ee_self = ((2.0 / 3.0) * k0 * k0 * ig - 1.0 / 3.0) / h3;

  Eigen::Index idx = 0;
  for (int i = 0; i < t.padded[0]; ++i) {
    const double ox = h * wrap_offset(i, t.padded[0]);
    for (int j = 0; j < t.padded[1]; ++j) {
      const double oy = h * wrap_offset(j, t.padded[1]);
      for (int k = 0; k < t.padded[2]; ++k, ++idx) {
        const double oz = h * wrap_offset(k, t.padded[2]);
        const double r = std::sqrt(ox * ox + oy * oy + oz * oz);
        if (r == 0.0) {
          t.scalar_hat[idx] = -ig / h3;
          t.ee_hat[0][idx] = t.ee_hat[1][idx] = t.ee_hat[2][idx] = ee_self;
          t.ee_hat[3][idx] = t.ee_hat[4][idx] = t.ee_hat[5][idx] = Cplx(0, 0);
          t.w_hat[0][idx] = t.w_hat[1][idx] = t.w_hat[2][idx] = Cplx(0, 0);
          continue;
        }
        const RadialKernel rk = radial(k0, r);
        const double rh[3] = {ox / r, oy / r, oz / r};
        const Cplx P = k0 * k0 * rk.g + rk.gp / r;
        const Cplx Q = rk.gpp - rk.gp / r;
        t.scalar_hat[idx] = -rk.g;
        for (int a = 0; a < 3; ++a) {
          t.ee_hat[a][idx] = Q * rh[a] * rh[a] + P;
          t.w_hat[a][idx] = rk.gp * rh[a];
        }
        t.ee_hat[3][idx] = Q * rh[0] * rh[1];
        t.ee_hat[4][idx] = Q * rh[0] * rh[2];
        t.ee_hat[5][idx] = Q * rh[1] * rh[2];
      }
    }
  }

  t.fft->forward(t.scalar_hat.data());
  for (auto& e : t.ee_hat) t.fft->forward(e.data());
  for (auto& w : t.w_hat) t.fft->forward(w.data());
  return t;
}

std::string kernel_table_key(double k0, double h, const std::array<int, 3>& dims) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "k0=%.17g_h=%.17g_dims=%dx%dx%d", k0, h, dims[0],
                dims[1], dims[2]);
  return buf;
}

namespace {
constexpr char kTableMagic[8] = {'M', 'V', 'K', 'T', 'B', 'L', '0', '1'};
}

void save_kernel_table(const KernelTable& t, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open kernel table file for writing: " + path);
  os.write(kTableMagic, sizeof kTableMagic);
  os.write(reinterpret_cast<const char*>(&t.k0), sizeof t.k0);
  os.write(reinterpret_cast<const char*>(&t.h), sizeof t.h);
  os.write(reinterpret_cast<const char*>(t.dims.data()), sizeof t.dims);
  os.write(reinterpret_cast<const char*>(t.padded.data()), sizeof t.padded);
  os.write(reinterpret_cast<const char*>(&t.self_cell), sizeof t.self_cell);
  const auto dump = [&](const CVecX& v) {
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(sizeof(Cplx) * v.size()));
  };
  dump(t.scalar_hat);
  for (const auto& e : t.ee_hat) dump(e);
  for (const auto& w : t.w_hat) dump(w);
  if (!os) throw Error("short write while saving kernel table: " + path);
}

KernelTable load_kernel_table(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open kernel table file: " + path);
  char magic[sizeof kTableMagic];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kTableMagic, sizeof magic) != 0)
    throw Error("not a kernel table file (bad header): " + path);
  KernelTable t;
  is.read(reinterpret_cast<char*>(&t.k0), sizeof t.k0);
  is.read(reinterpret_cast<char*>(&t.h), sizeof t.h);
  is.read(reinterpret_cast<char*>(t.dims.data()), sizeof t.dims);
  is.read(reinterpret_cast<char*>(t.padded.data()), sizeof t.padded);
  is.read(reinterpret_cast<char*>(&t.self_cell), sizeof t.self_cell);
  const Eigen::Index np = t.padded_size();
  const auto slurp = [&](CVecX& v) {
    v.resize(np);
    is.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(sizeof(Cplx) * np));
  };
  slurp(t.scalar_hat);
  for (auto& e : t.ee_hat) slurp(e);
  for (auto& w : t.w_hat) slurp(w);
  if (!is) throw Error("truncated kernel table file: " + path);
  t.fft = std::make_shared<Fft3>(t.padded);
  return t;
}

CVecX newtonian_apply(const KernelTable& t, const VoxelDomain& dom, const CVecX& f) {
  if (f.size() != dom.size()) throw DimensionMismatch();
  const Eigen::Index np = t.padded_size();
  const double h3 = dom.h * dom.h * dom.h;
  CVecX masked = (f.array() * dom.chi.array().cast<Cplx>()).matrix() * h3;
  CVecX pad(np);
  embed(dom, t.padded, masked.data(), pad.data());
  t.fft->forward(pad.data());
  pad.array() *= t.scalar_hat.array();
  t.fft->backward(pad.data());
  CVecX out(dom.size());
  restrict_scaled(dom, t.padded, pad.data(), out.data(), 1.0 / static_cast<double>(np));
  return out;
}

Field newtonian_apply(const KernelTable& t, const VoxelDomain& dom, const Field& f) {
  check_field(dom, f);
  Field out(6, dom.size());
  for (int c = 0; c < 6; ++c)
    out.row(c) = newtonian_apply(t, dom, CVecX(f.row(c).transpose())).transpose();
  return out;
}

CVecX newtonian_second_derivative(const KernelTable& t, const VoxelDomain& dom,
                                  const CVecX& f, int axis_a, int axis_b) {
  if (f.size() != dom.size()) throw DimensionMismatch();
  if (axis_a < 0 || axis_a > 2 || axis_b < 0 || axis_b > 2)
    throw Error("derivative axis out of range");
  const Eigen::Index np = t.padded_size();
  const double h3 = dom.h * dom.h * dom.h;
  CVecX masked = (f.array() * dom.chi.array().cast<Cplx>()).matrix() * h3;
  CVecX pad(np);
  embed(dom, t.padded, masked.data(), pad.data());
  t.fft->forward(pad.data());

  std::array<VecX, 3> xi;
  for (int a = 0; a < 3; ++a) {
    xi[a].resize(t.padded[a]);
    const double step = 2.0 * kPi / (t.padded[a] * t.h);
    for (int i = 0; i < t.padded[a]; ++i) xi[a][i] = step * wrap_offset(i, t.padded[a]);
  }
  Eigen::Index idx = 0;
  for (int i = 0; i < t.padded[0]; ++i)
    for (int j = 0; j < t.padded[1]; ++j)
      for (int k = 0; k < t.padded[2]; ++k, ++idx) {
        const double xa = axis_a == 0 ? xi[0][i] : (axis_a == 1 ? xi[1][j] : xi[2][k]);
        const double xb = axis_b == 0 ? xi[0][i] : (axis_b == 1 ? xi[1][j] : xi[2][k]);
        pad[idx] *= -xa * xb * t.scalar_hat[idx];
      }
  t.fft->backward(pad.data());
  CVecX out(dom.size());
  restrict_scaled(dom, t.padded, pad.data(), out.data(), 1.0 / static_cast<double>(np));
  return out;
}

namespace {

// Shared transform machinery: out = restrict(IFFT(D(xi) FFT(embed(j)))) with the
// block multiplier D = [[A/w, ce X], [ch X, A/w]], A the symmetric tensor
// spectra and X the curl-vector cross action.
Field dyadic_apply_impl(const KernelTable& t, const VoxelDomain& dom, const Field& j,
                        double inv_w, Cplx ce, Cplx ch, bool mask_input) {
  check_field(dom, j);
  const Eigen::Index np = t.padded_size();
  const double h3 = dom.h * dom.h * dom.h;

  std::array<CVecX, 6> F;
  for (int c = 0; c < 6; ++c) {
    CVecX comp = j.row(c).transpose();
    if (mask_input) comp = (comp.array() * dom.chi.array().cast<Cplx>()).matrix() * h3;
    F[c].resize(np);
    embed(dom, t.padded, comp.data(), F[c].data());
    t.fft->forward(F[c].data());
  }

  const auto ee = [&](int a, int b) -> const CVecX& { return t.ee_hat[sym_index(a, b)]; };

  Field out(6, dom.size());
  CVecX acc(np);
  CVecX comp_out(dom.size());
  const double scale = 1.0 / static_cast<double>(np);
  for (int a = 0; a < 3; ++a) {
    const int b1 = (a + 1) % 3, b2 = (a + 2) % 3;
    // Electric output: symmetric block on E plus curl coupling from H.
    acc = inv_w * (ee(a, 0).cwiseProduct(F[0]) + ee(a, 1).cwiseProduct(F[1]) +
                   ee(a, 2).cwiseProduct(F[2]));
    acc += ce * (t.w_hat[b1].cwiseProduct(F[3 + b2]) - t.w_hat[b2].cwiseProduct(F[3 + b1]));
    t.fft->backward(acc.data());
    restrict_scaled(dom, t.padded, acc.data(), comp_out.data(), scale);
    out.row(a) = comp_out.transpose();

    // Magnetic output: same symmetric block on H, opposite-signed coupling from E.
    acc = inv_w * (ee(a, 0).cwiseProduct(F[3]) + ee(a, 1).cwiseProduct(F[4]) +
                   ee(a, 2).cwiseProduct(F[5]));
    acc += ch * (t.w_hat[b1].cwiseProduct(F[b2]) - t.w_hat[b2].cwiseProduct(F[b1]));
    t.fft->backward(acc.data());
    restrict_scaled(dom, t.padded, acc.data(), comp_out.data(), scale);
    out.row(3 + a) = comp_out.transpose();
  }
  return out;
}

void check_table(const KernelTable& t, const MediumSpec& m) {
  if (std::abs(m.k0() - t.k0) > 1e-12 * std::max(1.0, std::abs(t.k0)))
    throw Error("kernel table wavenumber does not match the medium");
}

}  // namespace

Field dyadic_green_apply(const KernelTable& t, const MediumSpec& m, const VoxelDomain& dom,
                         const Field& j) {
  check_table(t, m);
  return dyadic_apply_impl(t, dom, j, 1.0 / m.omega, Cplx(0, m.mu0), Cplx(0, -m.eps0),
                           true);
}

Field dyadic_green_apply_adjoint(const KernelTable& t, const MediumSpec& m,
                                 const VoxelDomain& dom, const Field& j) {
  check_table(t, m);
  // conj(D)^T F = conj(D'' conj(F)) with the coupling constants swapped; the
  // chi h^3 quadrature weight moves to the output side.
  const Field impl = dyadic_apply_impl(t, dom, j.conjugate(), 1.0 / m.omega,
                                       Cplx(0, -m.eps0), Cplx(0, m.mu0), false);
  Field out = impl.conjugate();
  const VecX w = dom.chi * (dom.h * dom.h * dom.h);
  for (Eigen::Index v = 0; v < dom.size(); ++v) out.col(v) *= w[v];
  return out;
}

CMat6 dyadic_green_column(const MediumSpec& m, const Vec3& r) {
  const double d = r.norm();
  if (d == 0.0) throw SingularPoint();
  const double k0 = m.k0();
  const RadialKernel rk = radial(k0, d);
  const Vec3 rh = r / d;
  const CMat3 rrT = (rh * rh.transpose()).cast<Cplx>();
  const CMat3 diag = (k0 * k0 * rk.g * CMat3::Identity() + (rk.gpp - rk.gp / d) * rrT +
                      (rk.gp / d) * CMat3::Identity()) /
                     m.omega;
  const CMat3 curl = rk.gp * cross_matrix(rh).cast<Cplx>();
  CMat6 G;
  G.block<3, 3>(0, 0) = diag;
  G.block<3, 3>(3, 3) = diag;
  G.block<3, 3>(0, 3) = (kI * m.mu0) * curl;
  G.block<3, 3>(3, 0) = (-kI * m.eps0) * curl;
  return G;
}

CMat6 dyadic_green_self(const MediumSpec& m, double h) {
  const double k0 = m.k0();
  const Cplx ig = ball_integral(k0, equivalent_radius(h));
  const Cplx s = ((2.0 / 3.0) * k0 * k0 * ig - 1.0 / 3.0) / (m.omega * h * h * h);
  CMat6 G = CMat6::Zero();
  G.block<3, 3>(0, 0) = s * CMat3::Identity();
  G.block<3, 3>(3, 3) = s * CMat3::Identity();
  return G;
}

}  // namespace mvie
