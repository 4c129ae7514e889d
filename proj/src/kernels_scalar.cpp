// SPDX-License-Identifier: MIT
// Reference loops. The operation order mirrors the AVX2 lanes so the two
// variants agree bit for bit (no FMA contraction in either translation unit).
#include "mbrh/kernels.hpp"

namespace mbrh::kernels::scalar {

void cauchy(const NodeArrays& a, double zar, double zai, double zor, double zoi, double* outr, double* outi) {
  for (int j = 0; j < a.n; ++j) {
    const double dr = (a.ar[j] - zar) + (a.orr[j] - zor);
    const double di = (a.ai[j] - zai) + (a.oi[j] - zoi);
    const double den = dr * dr + di * di;
    outr[j] = (a.wr[j] * dr + a.wi[j] * di) / den;
    outi[j] = (a.wi[j] * dr - a.wr[j] * di) / den;
  }
}

namespace {

struct Step {
  double nr, rr, ri;
};

inline Step one(double lam, double r, double i, double n, double er, double ei, double dt) {
  const double h = 0.5 * dt;
  const double e2 = er * er + ei * ei;
  const double q = (h * h) * (lam * lam + 0.25 * e2);
  const double inv = 1.0 / (1.0 + q);
  const double ar = (1.0 - q) * inv;
  const double ai = -(lam * dt) * inv;
  const double br = -(er * h) * inv;
  const double bi = -(ei * h) * inv;
  // |a|^2 - |b|^2
  const double c = (ar * ar + ai * ai) - (br * br + bi * bi);
  // a * conj(b)
  const double abr = ar * br + ai * bi;
  const double abi = ai * br - ar * bi;
  // 2 Re(a conj(b) rho)
  const double mix = 2.0 * (abr * r - abi * i);
  // a^2, b^2, a b
  const double a2r = ar * ar - ai * ai, a2i = 2.0 * ar * ai;
  const double b2r = br * br - bi * bi, b2i = 2.0 * br * bi;
  const double pr = ar * br - ai * bi, pi = ar * bi + ai * br;
  Step s;
  s.nr = c * n + mix;
  // a^2 rho - b^2 conj(rho) - 2 a b N
  s.rr = ((a2r * r - a2i * i) - (b2r * r + b2i * i)) - 2.0 * pr * n;
  s.ri = ((a2r * i + a2i * r) - (b2i * r - b2r * i)) - 2.0 * pi * n;
  return s;
}

}  // namespace

cplx bloch(const BlochArrays& a, double er, double ei, double dt) {
  double sr[4] = {0, 0, 0, 0}, si[4] = {0, 0, 0, 0};
  const int n4 = a.n - a.n % 4;
  for (int j = 0; j < n4; ++j) {
    const Step s = one(a.lambda[j], a.in_re[j], a.in_im[j], a.in_n[j], er, ei, dt);
    a.out_n[j] = s.nr;
    a.out_re[j] = s.rr;
    a.out_im[j] = s.ri;
    sr[j % 4] = sr[j % 4] + a.wn[j] * s.rr;
    si[j % 4] = si[j % 4] + a.wn[j] * s.ri;
  }
  double tr = (sr[0] + sr[1]) + (sr[2] + sr[3]);
  double ti = (si[0] + si[1]) + (si[2] + si[3]);
  for (int j = n4; j < a.n; ++j) {
    const Step s = one(a.lambda[j], a.in_re[j], a.in_im[j], a.in_n[j], er, ei, dt);
    a.out_n[j] = s.nr;
    a.out_re[j] = s.rr;
    a.out_im[j] = s.ri;
    tr += a.wn[j] * s.rr;
    ti += a.wn[j] * s.ri;
  }
  return {tr, ti};
}

}  // namespace mbrh::kernels::scalar
