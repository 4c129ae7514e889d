// SPDX-License-Identifier: MIT
// Four-lane versions of the scalar loops; built with -mavx2 only.
#include "mbrh/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace mbrh::kernels::avx2 {

#if defined(__AVX2__)

bool compiled() { return true; }

void cauchy(const NodeArrays& a, double zar, double zai, double zor, double zoi, double* outr, double* outi) {
  const __m256d vzar = _mm256_set1_pd(zar), vzai = _mm256_set1_pd(zai);
  const __m256d vzor = _mm256_set1_pd(zor), vzoi = _mm256_set1_pd(zoi);
  int j = 0;
  for (; j + 4 <= a.n; j += 4) {
    const __m256d dr = _mm256_add_pd(_mm256_sub_pd(_mm256_loadu_pd(a.ar + j), vzar),
                                     _mm256_sub_pd(_mm256_loadu_pd(a.orr + j), vzor));
    const __m256d di = _mm256_add_pd(_mm256_sub_pd(_mm256_loadu_pd(a.ai + j), vzai),
                                     _mm256_sub_pd(_mm256_loadu_pd(a.oi + j), vzoi));
    const __m256d den = _mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(di, di));
    const __m256d wr = _mm256_loadu_pd(a.wr + j), wi = _mm256_loadu_pd(a.wi + j);
    const __m256d nr = _mm256_add_pd(_mm256_mul_pd(wr, dr), _mm256_mul_pd(wi, di));
    const __m256d ni = _mm256_sub_pd(_mm256_mul_pd(wi, dr), _mm256_mul_pd(wr, di));
    _mm256_storeu_pd(outr + j, _mm256_div_pd(nr, den));
    _mm256_storeu_pd(outi + j, _mm256_div_pd(ni, den));
  }
  if (j < a.n) {
    NodeArrays tail{a.ar + j, a.ai + j, a.orr + j, a.oi + j, a.wr + j, a.wi + j, a.n - j};
    scalar::cauchy(tail, zar, zai, zor, zoi, outr + j, outi + j);
  }
}

cplx bloch(const BlochArrays& a, double er, double ei, double dt) {
  const double h = 0.5 * dt;
  const double e2 = er * er + ei * ei;
  const __m256d one = _mm256_set1_pd(1.0), two = _mm256_set1_pd(2.0), quarter_e2 = _mm256_set1_pd(0.25 * e2);
  const __m256d hh = _mm256_set1_pd(h * h), vdt = _mm256_set1_pd(dt);
  const __m256d erh = _mm256_set1_pd(er * h), eih = _mm256_set1_pd(ei * h);
  const __m256d zero = _mm256_setzero_pd();
  __m256d accr = zero, acci = zero;
  const int n4 = a.n - a.n % 4;
  for (int j = 0; j < n4; j += 4) {
    const __m256d lam = _mm256_loadu_pd(a.lambda + j);
    const __m256d r = _mm256_loadu_pd(a.in_re + j), i = _mm256_loadu_pd(a.in_im + j);
    const __m256d n = _mm256_loadu_pd(a.in_n + j);
    const __m256d q = _mm256_mul_pd(hh, _mm256_add_pd(_mm256_mul_pd(lam, lam), quarter_e2));
    const __m256d inv = _mm256_div_pd(one, _mm256_add_pd(one, q));
    const __m256d ar = _mm256_mul_pd(_mm256_sub_pd(one, q), inv);
    const __m256d ai = _mm256_sub_pd(zero, _mm256_mul_pd(_mm256_mul_pd(lam, vdt), inv));
    const __m256d br = _mm256_sub_pd(zero, _mm256_mul_pd(erh, inv));
    const __m256d bi = _mm256_sub_pd(zero, _mm256_mul_pd(eih, inv));
    const __m256d c = _mm256_sub_pd(_mm256_add_pd(_mm256_mul_pd(ar, ar), _mm256_mul_pd(ai, ai)),
                                    _mm256_add_pd(_mm256_mul_pd(br, br), _mm256_mul_pd(bi, bi)));
    const __m256d abr = _mm256_add_pd(_mm256_mul_pd(ar, br), _mm256_mul_pd(ai, bi));
    const __m256d abi = _mm256_sub_pd(_mm256_mul_pd(ai, br), _mm256_mul_pd(ar, bi));
    const __m256d mix = _mm256_mul_pd(two, _mm256_sub_pd(_mm256_mul_pd(abr, r), _mm256_mul_pd(abi, i)));
    const __m256d a2r = _mm256_sub_pd(_mm256_mul_pd(ar, ar), _mm256_mul_pd(ai, ai));
    const __m256d a2i = _mm256_mul_pd(_mm256_mul_pd(two, ar), ai);
    const __m256d b2r = _mm256_sub_pd(_mm256_mul_pd(br, br), _mm256_mul_pd(bi, bi));
    const __m256d b2i = _mm256_mul_pd(_mm256_mul_pd(two, br), bi);
    const __m256d pr = _mm256_sub_pd(_mm256_mul_pd(ar, br), _mm256_mul_pd(ai, bi));
    const __m256d pi = _mm256_add_pd(_mm256_mul_pd(ar, bi), _mm256_mul_pd(ai, br));
    const __m256d nn = _mm256_add_pd(_mm256_mul_pd(c, n), mix);
    const __m256d rr = _mm256_sub_pd(
        _mm256_sub_pd(_mm256_sub_pd(_mm256_mul_pd(a2r, r), _mm256_mul_pd(a2i, i)),
                      _mm256_add_pd(_mm256_mul_pd(b2r, r), _mm256_mul_pd(b2i, i))),
        _mm256_mul_pd(_mm256_mul_pd(two, pr), n));
    const __m256d ri = _mm256_sub_pd(
        _mm256_sub_pd(_mm256_add_pd(_mm256_mul_pd(a2r, i), _mm256_mul_pd(a2i, r)),
                      _mm256_sub_pd(_mm256_mul_pd(b2i, r), _mm256_mul_pd(b2r, i))),
        _mm256_mul_pd(_mm256_mul_pd(two, pi), n));
    _mm256_storeu_pd(a.out_n + j, nn);
    _mm256_storeu_pd(a.out_re + j, rr);
    _mm256_storeu_pd(a.out_im + j, ri);
    const __m256d wn = _mm256_loadu_pd(a.wn + j);
    accr = _mm256_add_pd(accr, _mm256_mul_pd(wn, rr));
    acci = _mm256_add_pd(acci, _mm256_mul_pd(wn, ri));
  }
  alignas(32) double lr[4], li[4];
  _mm256_store_pd(lr, accr);
  _mm256_store_pd(li, acci);
  double tr = (lr[0] + lr[1]) + (lr[2] + lr[3]);
  double ti = (li[0] + li[1]) + (li[2] + li[3]);
  // Tail one element at a time, accumulated in the same order as the scalar loop.
  for (int j = n4; j < a.n; ++j) {
    BlochArrays one_el{a.lambda + j, a.wn + j, a.in_re + j, a.in_im + j, a.in_n + j,
                       a.out_re + j, a.out_im + j, a.out_n + j, 1};
    const cplx t = scalar::bloch(one_el, er, ei, dt);
    tr += t.real();
    ti += t.imag();
  }
  return {tr, ti};
}

#else

bool compiled() { return false; }
void cauchy(const NodeArrays& a, double zar, double zai, double zor, double zoi, double* outr, double* outi) {
  scalar::cauchy(a, zar, zai, zor, zoi, outr, outi);
}
cplx bloch(const BlochArrays& a, double er, double ei, double dt) { return scalar::bloch(a, er, ei, dt); }

#endif

}  // namespace mbrh::kernels::avx2
