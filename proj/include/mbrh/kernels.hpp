// Hot loops with scalar and AVX2 variants selected at run time.
// SPDX-License-Identifier: MIT
#pragma once

#include "mbrh/common.hpp"

namespace mbrh::kernels {

// Nodes in split storage: s_j = (ar + i ai) + (or + i oi), weight w_j.
struct NodeArrays {
  const double* ar;
  const double* ai;
  const double* orr;
  const double* oi;
  const double* wr;
  const double* wi;
  int n;
};

// out_j = w_j / (s_j - z) with s_j - z formed as (anchor_j - za) + (off_j - zo).
using CauchyFn = void (*)(const NodeArrays&, double zar, double zai, double zor, double zoi, double* outr,
                          double* outi);

// One Cayley step of the Bloch pair for every detuning; returns
// sum_j wn_j rho_j of the updated state.
struct BlochArrays {
  const double* lambda;
  const double* wn;  // quadrature weight times density
  const double* in_re;
  const double* in_im;
  const double* in_n;
  double* out_re;
  double* out_im;
  double* out_n;
  int n;
};
using BlochFn = cplx (*)(const BlochArrays&, double e_re, double e_im, double dt);

namespace scalar {
void cauchy(const NodeArrays&, double, double, double, double, double*, double*);
cplx bloch(const BlochArrays&, double, double, double);
}  // namespace scalar

namespace avx2 {
bool compiled();
void cauchy(const NodeArrays&, double, double, double, double, double*, double*);
cplx bloch(const BlochArrays&, double, double, double);
}  // namespace avx2

// Dispatched entry points.
void cauchy(const NodeArrays& a, cplx za, cplx zo, double* outr, double* outi);
cplx bloch(const BlochArrays& a, cplx E, double dt);

// Name of the active variant ("avx2" or "scalar").
const char* active_variant();
// Forces the scalar variant (also via MBRH_FORCE_SCALAR=1 in the environment).
void force_scalar(bool on);

}  // namespace mbrh::kernels
