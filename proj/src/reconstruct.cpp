// SPDX-License-Identifier: MIT
#include "mbrh/reconstruct.hpp"

#include <cmath>
#include <limits>

namespace mbrh {

namespace {

double max_abs(const Mat2& a) { return a.cwiseAbs().maxCoeff(); }

Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }

bool finite(const Mat2& a) { return a.allFinite(); }
bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Distance from Re E below which the formula is replaced by interpolation.
constexpr double kJunctionGap = 1e-9;
constexpr double kJunctionStep = 1e-3;

Mat2 density_formula(const RHSolution& a, const RHSolution& b, double lambda) {
  const Mat2 Mt = a.M_plus(lambda);
  const Mat2 M0 = b.M_plus(lambda);
  const cplx e = std::exp(-kI * lambda * a.t());
  Mat2 left = Mt;
  left.col(0) *= e;
  left.col(1) /= e;  // M(t) e^{-i lambda t sigma3}
  const Mat2 inner = M0.inverse() * sigma3() * M0;
  return -(left * inner * left.inverse());
}

}  // namespace

Mat2 h_matrix(cplx E) { return mat2(0.0, 0.5 * E, -0.5 * std::conj(E), 0.0); }

FieldSample extract_field(const RHSolution& s) {
  FieldSample out;
  out.m = s.m();
  out.E = -4.0 * kI * out.m(0, 1);
  out.H = -kI * commutator(sigma3(), out.m);
  return out;
}

Mat2 density_matrix(const RHSolution& at_tx, const RHSolution& at_0x, double lambda) {
  if (at_0x.t() != 0.0) throw PreconditionError("density_matrix: second solution must be at t = 0");
  if (at_0x.x() != at_tx.x()) throw PreconditionError("density_matrix: solutions at different x");
  const double re = at_tx.re_e();
  if (std::abs(lambda - re) > kJunctionGap) return density_formula(at_tx, at_0x, lambda);
  // Cubic through four symmetric neighbours, evaluated at the centre.
  const double h = kJunctionStep;
  const Mat2 fm2 = density_formula(at_tx, at_0x, re - 2 * h);
  const Mat2 fm1 = density_formula(at_tx, at_0x, re - h);
  const Mat2 fp1 = density_formula(at_tx, at_0x, re + h);
  const Mat2 fp2 = density_formula(at_tx, at_0x, re + 2 * h);
  return (4.0 * (fm1 + fp1) - (fm2 + fp2)) / 6.0;
}

void FieldSolution::allocate(bool with_f) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  E.assign(t.size() * x.size(), cplx(nan, nan));
  m.clear();
  F.clear();
  if (with_f) F.assign(t.size() * x.size() * grid.lambda.size(), Mat2::Constant(cplx(nan, nan)));
}

Mat2 cauchy_of_F(const FieldSolution& fs, const BroadeningProfile& prof, int i, int j, cplx z, Side side,
                 const std::optional<Mat2>& F_at) {
  const LambdaGrid& g = fs.grid;
  const double L = prof.support();
  const bool on_support = z.imag() == 0 && std::abs(z.real()) < L;
  if (on_support && side == Side::None) throw PreconditionError("cauchy_of_F: side required on the support");
  Mat2 s = Mat2::Zero();
  if (!on_support) {
    for (int k = 0; k < g.size(); ++k) s += (g.weight[k] * g.density[k] / (g.lambda[k] - z)) * fs.f(i, j, k);
    return 0.25 * s;
  }
  if (!F_at) throw PreconditionError("cauchy_of_F: F(lambda) required for a sided value");
  const double lam = z.real();
  for (int k = 0; k < g.size(); ++k) {
    const double d = g.lambda[k] - lam;
    if (d == 0) continue;  // the subtracted integrand vanishes there
    s += (g.weight[k] * g.density[k] / d) * (fs.f(i, j, k) - *F_at);
  }
  s += prof.principal_value(lam) * *F_at;
  const double sgn = side == Side::Plus ? 1.0 : -1.0;
  return 0.25 * s + (sgn * kPi * 0.25 * prof.n(lam)) * kI * *F_at;
}

ResidualReport residual_suite(const FieldSolution& fs, const BroadeningProfile& prof,
                              const std::vector<cplx>& zc_probes) {
  const int nt = fs.nt(), nx = fs.nx(), nl = fs.nl();
  if (nt < 3 || nx < 3) throw PreconditionError("residual_suite: need at least 3 points per axis");
  if (fs.F.size() != static_cast<size_t>(nt) * nx * nl)
    throw PreconditionError("residual_suite: density matrix samples missing");
  const double dt = fs.t[1] - fs.t[0], dx = fs.x[1] - fs.x[0];
  for (int i = 1; i < nt; ++i)
    if (std::abs(fs.t[i] - fs.t[i - 1] - dt) > 1e-12 * (1 + std::abs(dt)))
      throw PreconditionError("residual_suite: t axis is not uniform");
  for (int j = 1; j < nx; ++j)
    if (std::abs(fs.x[j] - fs.x[j - 1] - dx) > 1e-12 * (1 + std::abs(dx)))
      throw PreconditionError("residual_suite: x axis is not uniform");

  const LambdaGrid& g = fs.grid;
  const Mat2 s3 = sigma3();
  ResidualReport rep;

  auto populated = [&](int i, int j) {
    if (!finite(fs.e(i, j))) return false;
    for (int k = 0; k < nl; ++k)
      if (!finite(fs.f(i, j, k))) return false;
    return true;
  };

  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nx; ++j) {
      if (!populated(i, j)) continue;
      for (int k = 0; k < nl; ++k) {
        const Mat2& F = fs.f(i, j, k);
        rep.hermitian = std::max(rep.hermitian, max_abs(F - F.adjoint()));
        rep.trace = std::max(rep.trace, std::abs(F.trace()));
        rep.normalization =
            std::max(rep.normalization, std::abs(std::norm(F(0, 0)) + std::norm(F(0, 1)) - 1.0));
      }
    }

  for (int i = 1; i + 1 < nt; ++i)
    for (int j = 1; j + 1 < nx; ++j) {
      if (!populated(i, j) || !populated(i - 1, j) || !populated(i + 1, j) || !populated(i, j - 1) ||
          !populated(i, j + 1))
        continue;
      ++rep.points;
      const Mat2 H = h_matrix(fs.e(i, j));
      const Mat2 Ht = (h_matrix(fs.e(i + 1, j)) - h_matrix(fs.e(i - 1, j))) / (2 * dt);
      const Mat2 Hx = (h_matrix(fs.e(i, j + 1)) - h_matrix(fs.e(i, j - 1))) / (2 * dx);
      Mat2 source = Mat2::Zero();
      for (int k = 0; k < nl; ++k) source += (g.weight[k] * g.density[k]) * commutator(s3, fs.f(i, j, k));
      rep.mb_field = std::max(rep.mb_field, max_abs(Ht + Hx - 0.25 * source));

      for (int k = 0; k < nl; ++k) {
        const Mat2 Ft = (fs.f(i + 1, j, k) - fs.f(i - 1, j, k)) / (2 * dt);
        const Mat2 gen = (kI * g.lambda[k]) * s3 + H;
        rep.mb_density = std::max(rep.mb_density, max_abs(Ft + commutator(gen, fs.f(i, j, k))));
      }

      for (cplx z : zc_probes) {
        const Mat2 G = cauchy_of_F(fs, prof, i, j, z);
        const Mat2 Gt = (cauchy_of_F(fs, prof, i + 1, j, z) - cauchy_of_F(fs, prof, i - 1, j, z)) / (2 * dt);
        const Mat2 U = (-kI * z) * s3 - H;
        const Mat2 V = (kI * z) * s3 + H - kI * G;
        const Mat2 Ux = -Hx;
        const Mat2 Vt = Ht - kI * Gt;
        rep.zero_curvature = std::max(rep.zero_curvature, max_abs(Ux - Vt + commutator(U, V)));
      }
    }
  return rep;
}

}  // namespace mbrh
